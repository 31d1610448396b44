// Copyright 2026 The irisattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>

#include "iris/config.hpp"
#include "iris/encoding.hpp"
#include "iris/error.hpp"
#include "iris/evaluation.hpp"
#include "iris/iris_template.hpp"
#include "iris/matching.hpp"
#include "iris/normalization.hpp"
#include "iris/pgm.hpp"
#include "iris/segmentation.hpp"
#include "iris/spoofsim.hpp"

namespace iris::cli {

namespace {

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    const int n = std::snprintf(nullptr, 0, f, args...);
    std::string s(static_cast<std::size_t>(n) + 1, '\0');
    std::snprintf(s.data(), s.size(), f, args...);
    s.resize(static_cast<std::size_t>(n));
    return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Options every subcommand accepts. Layering: defaults < --config < --set <
// subcommand flags.
struct Common {
    std::string config_file;
    std::vector<std::string> sets;
    int jobs = 1;

    void attach(CLI::App* sub) {
        sub->add_option("-c,--config", config_file, "key = value settings file");
        sub->add_option("--set", sets, "override one setting, KEY=VALUE (repeatable)");
        sub->add_option("-j,--jobs", jobs, "worker threads for synth/eval (output is identical for any value)")
            ->check(CLI::Range(1, 256));
    }

    Config load() const {
        Config cfg = config_file.empty() ? Config{} : Config::from_file(config_file);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "--set expects KEY=VALUE, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        return cfg;
    }
};

std::string circle_text(const Circle& c) { return fmt("%.1f %.1f %.1f", c.cx, c.cy, c.r); }

std::string lid_text(const std::optional<EyelidLine>& lid) {
    if (!lid) return "none";
    return fmt("%.6f %.6f %.1f", lid->a, lid->b, lid->c);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Iris verification pipeline and spoof-attack benchmark", "irisattack"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    Common common;
    std::function<void()> action;

    // synth
    std::string synth_out;
    int users = 27;
    std::uint64_t synth_seed = 7;
    int sessions = 2;
    int images = 4;
    std::string preset, chain;
    auto* synth = app.add_subcommand("synth", "render a synthetic real/fake dataset and its manifest");
    synth->add_option("-o,--out", synth_out, "output directory")->required();
    synth->add_option("-u,--users", users, "number of users (two eyes each)")->check(CLI::Range(1, 100000));
    synth->add_option("-s,--seed", synth_seed, "dataset seed");
    synth->add_option("--sessions", sessions, "sessions per eye")->check(CLI::Range(1, 100));
    synth->add_option("--images", images, "images per session")->check(CLI::Range(1, 100));
    synth->add_option("--preset", preset, "recapture preset (see preset-list)");
    synth->add_option("--chain", chain, "preprocessing chain preset or step list");
    common.attach(synth);

    // segment
    std::string image_path, overlay_path;
    auto* segment = app.add_subcommand("segment", "locate pupil, iris and eyelids in a PGM image");
    segment->add_option("image", image_path, "input PGM")->required();
    segment->add_option("--overlay", overlay_path, "write the annotated image here (PGM)");
    common.attach(segment);

    // normalize
    std::string pattern_out, mask_out;
    auto* normalize_cmd = app.add_subcommand("normalize", "unwrap the iris into a rectangular pattern");
    normalize_cmd->add_option("image", image_path, "input PGM")->required();
    normalize_cmd->add_option("-o,--out", pattern_out, "pattern image (PGM)")->required();
    normalize_cmd->add_option("--mask", mask_out, "noise mask image (PGM, 255 = masked)");
    common.attach(normalize_cmd);

    // encode
    std::string template_out;
    auto* encode_cmd = app.add_subcommand("encode", "compute the binary iris template of an image");
    encode_cmd->add_option("image", image_path, "input PGM")->required();
    encode_cmd->add_option("-o,--out", template_out, "template file")->required();
    common.attach(encode_cmd);

    // match
    std::string tmpl_a, tmpl_b;
    auto* match = app.add_subcommand("match", "masked Hamming distance between two templates");
    match->add_option("a", tmpl_a, "first template")->required();
    match->add_option("b", tmpl_b, "second template")->required();
    common.attach(match);

    // eval
    std::string manifest_path, scores_out, report_out, table_out;
    std::optional<std::uint64_t> protocol_seed;
    auto* eval = app.add_subcommand("eval", "run the NOM/attack protocol over a manifest and report");
    eval->add_option("manifest", manifest_path, "manifest.csv written by synth")->required();
    eval->add_option("--scores", scores_out, "write every comparison as CSV");
    eval->add_option("--report", report_out, "write the report document (JSON)");
    eval->add_option("--table", table_out, "write the operating-point table (text)");
    eval->add_option("--seed", protocol_seed, "impostor sampling seed");
    common.attach(eval);

    auto* presets = app.add_subcommand("preset-list", "list preprocessing and recapture presets");
    bool show_config = false;
    presets->add_flag("--config-keys", show_config, "also print every setting with its effective value");
    common.attach(presets);

    synth->callback([&] {
        action = [&] {
            Config cfg = common.load();
            if (!preset.empty()) cfg.set("recapture.preset", preset);
            if (!chain.empty()) cfg.set("chain.steps", chain);
            cfg.validate();
            DatasetSpec spec;
            spec.n_users = users;
            spec.sessions = sessions;
            spec.images_per_session = images;
            spec.recapture = cfg.recapture();
            spec.chain = cfg.chain();
            spec.seed = synth_seed;
            spec.jobs = common.jobs;
            const auto manifest = build_dataset(spec, synth_out);
            out << "manifest " << (std::filesystem::path(synth_out) / "manifest.csv").string() << ": "
                << manifest.count(SampleKind::Real) << " real, " << manifest.count(SampleKind::Fake)
                << " fake\n";
        };
    });

    segment->callback([&] {
        action = [&] {
            const Config cfg = common.load();
            cfg.validate();
            const GrayImage img = read_pgm_file(image_path);
            const auto seg = segment_eye(img, cfg.pipeline().segmentation);
            out << "iris " << circle_text(seg.iris) << "\n"
                << "pupil " << circle_text(seg.pupil) << "\n"
                << "upper_eyelid " << lid_text(seg.upper_eyelid) << "\n"
                << "lower_eyelid " << lid_text(seg.lower_eyelid) << "\n";
            if (!overlay_path.empty()) write_pgm_file(overlay_path, draw_overlay(img, seg));
        };
    });

    normalize_cmd->callback([&] {
        action = [&] {
            const Config cfg = common.load();
            cfg.validate();
            const auto pipe = cfg.pipeline();
            const GrayImage img = read_pgm_file(image_path);
            const auto pattern = normalize(img, segment_eye(img, pipe.segmentation), pipe.normalization);
            write_pgm_file(pattern_out, pattern.to_image());
            if (!mask_out.empty()) write_pgm_file(mask_out, pattern.mask_image());
            out << "pattern " << pattern.radial_res() << "x" << pattern.angular_res() << " masked="
                << pattern.masked_count() << "\n";
        };
    });

    encode_cmd->callback([&] {
        action = [&] {
            const Config cfg = common.load();
            cfg.validate();
            const auto t = extract_template(read_pgm_file(image_path), cfg.pipeline());
            write_file_bytes(template_out, serialize_template(t));
            out << "template " << t.rows() << "x" << t.cols() << " noise=" << t.noise_count() << "\n";
        };
    });

    match->callback([&] {
        action = [&] {
            const Config cfg = common.load();
            cfg.validate();
            const auto a = deserialize_template(read_file_bytes(tmpl_a));
            const auto b = deserialize_template(read_file_bytes(tmpl_b));
            const auto m = match_templates(a, b, cfg.pipeline().shift_budget);
            out << fmt("hd=%.6f shift=%d bits=%zu\n", m.hd, m.best_shift, m.effective_bits);
        };
    });

    eval->callback([&] {
        action = [&] {
            Config cfg = common.load();
            if (protocol_seed) cfg.set("protocol.seed", std::to_string(*protocol_seed));
            cfg.validate();
            const auto manifest = read_manifest(manifest_path);
            ProtocolConfig pc;
            pc.pipeline = cfg.pipeline();
            pc.protocol_seed = cfg.protocol_seed();
            pc.jobs = common.jobs;
            const auto base = std::filesystem::path(manifest_path).parent_path();
            const auto scores = run_protocol(manifest, base, pc);
            const auto report = build_report(scores, cfg.far_targets());
            const auto table = report_to_table(report);
            if (!scores_out.empty()) write_text(scores_out, scores_to_csv(scores));
            if (!report_out.empty()) write_text(report_out, report_to_json(report));
            if (!table_out.empty()) write_text(table_out, table);
            out << table;
        };
    });

    presets->callback([&] {
        action = [&] {
            const Config cfg = common.load();
            cfg.validate();
            out << "preprocessing chains:\n";
            for (const auto& p : chain_presets()) out << "  " << p.name << " = " << format_chain(p.chain) << "\n";
            out << "recapture presets (pitch, blur, contrast, noise):\n";
            for (const auto& p : recapture_presets()) {
                const auto& r = p.params;
                out << fmt("  %s = %d, %.2f, %.2f, %.2f\n", p.name.c_str(), r.halftone_pitch, r.blur_sigma,
                           r.contrast, r.noise_sigma);
            }
            if (show_config) out << "settings:\n" << cfg.dump();
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (app.get_subcommands().empty()) err << "run with --help for usage\n";
        return kUsageError;
    }

    try {
        action();
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::ConfigError ? kUsageError : kDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
}

} // namespace iris::cli
