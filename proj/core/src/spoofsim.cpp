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

#include "iris/spoofsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "detail.hpp"
#include "iris/error.hpp"
#include "iris/pgm.hpp"

namespace iris {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

std::uint64_t mix(std::uint64_t h, std::uint64_t v) noexcept {
    detail::Rng r(h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)));
    return r.next();
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

/// Value noise on an (angle, radius) lattice, periodic in angle.
class IrisTexture {
public:
    explicit IrisTexture(const EyeParams& p) : seed_(p.texture_seed), weights_(p.octave_weights) {
        weight_sum_ = 0.0;
        for (double w : weights_) weight_sum_ += std::abs(w);
        if (weight_sum_ <= 0.0) weight_sum_ = 1.0;
    }

    /// t in [0,1] from pupil to iris boundary, phi in turns.
    double operator()(double t, double phi) const {
        t = std::clamp(t, 0.0, 1.0);
        phi -= std::floor(phi);
        double acc = 0.0;
        for (std::size_t o = 0; o < weights_.size(); ++o) {
            if (weights_[o] == 0.0) continue;
            const int n_ang = 16 << o;
            const int n_rad = 3 << o;
            acc += weights_[o] * octave(o, t * n_rad, phi * n_ang, n_ang);
        }
        return acc / weight_sum_;
    }

private:
    double lattice(std::size_t octave, int i, int j) const {
        const std::uint64_t h = stable_hash({seed_, octave, static_cast<std::uint64_t>(i),
                                             static_cast<std::uint64_t>(j)});
        return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
    }

    double octave(std::size_t o, double u, double v, int n_ang) const {
        const int j0 = static_cast<int>(std::floor(u));
        const int i0 = static_cast<int>(std::floor(v));
        const double fu = smoothstep(u - j0);
        const double fv = smoothstep(v - i0);
        const int i1 = (i0 + 1) % n_ang;
        const int ia = i0 % n_ang;
        const double a = lattice(o, ia, j0) * (1 - fv) + lattice(o, i1, j0) * fv;
        const double b = lattice(o, ia, j0 + 1) * (1 - fv) + lattice(o, i1, j0 + 1) * fv;
        return a * (1 - fu) + b * fu;
    }

    std::uint64_t seed_;
    std::array<double, 4> weights_;
    double weight_sum_;
};

} // namespace

std::uint64_t stable_hash(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x243F6A8885A308D3ull;
    for (auto p : parts) h = mix(h, p);
    return h;
}

void EyeParams::validate() const {
    if (width < 1 || height < 1) invalid("eye image dimensions must be positive");
    if (!(pupil_r > 0.0) || !(pupil_r < iris_r)) invalid("eye needs 0 < pupil radius < iris radius");
    if (std::hypot(pupil_cx - iris_cx, pupil_cy - iris_cy) + pupil_r >= iris_r) {
        invalid("pupil must lie strictly inside the iris");
    }
    if (!(pupil_intensity < iris_intensity && iris_intensity < sclera_intensity)) {
        invalid("eye intensities must satisfy pupil < iris < sclera");
    }
    if (!(eyelid_coverage >= 0.0 && eyelid_coverage <= 1.0)) invalid("eyelid coverage must be in [0,1]");
    if (!(sensor_noise_sigma >= 0.0)) invalid("sensor noise sigma must be >= 0");
}

GrayImage render_synthetic_eye(const EyeParams& p) {
    p.validate();
    const IrisTexture texture(p);
    const double rot = p.texture_rotation_deg / 360.0;
    const double ox = p.iris_cx - p.pupil_cx;
    const double oy = p.iris_cy - p.pupil_cy;
    const double o2 = ox * ox + oy * oy;

    // Lids are horizontal half-planes, the same model segmentation fits. Their
    // edges sit on pixel rows and are antialiased, so the boundary row is a
    // 50/50 blend.
    const double upper_edge = std::round(p.iris_cy - p.iris_r + p.eyelid_coverage * 2.0 * p.iris_r);
    const double lower_edge = std::round(p.iris_cy + p.iris_r - p.eyelid_coverage * p.iris_r);
    const bool lids = p.eyelid_coverage > 0.0;

    GrayImage out(p.width, p.height);
    detail::Rng noise(p.noise_seed);
    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            double v = p.sclera_intensity;
            const double dx = x - p.pupil_cx;
            const double dy = y - p.pupil_cy;
            const double ix = x - p.iris_cx;
            const double iy = y - p.iris_cy;
            if (ix * ix + iy * iy <= p.iris_r * p.iris_r) {
                const double rho = std::hypot(dx, dy);
                if (rho <= p.pupil_r) {
                    v = p.pupil_intensity;
                } else {
                    const double ux = dx / rho;
                    const double uy = dy / rho;
                    const double proj = ox * ux + oy * uy;
                    const double bound = proj + std::sqrt(std::max(0.0, proj * proj - o2 + p.iris_r * p.iris_r));
                    const double t = (rho - p.pupil_r) / std::max(bound - p.pupil_r, 1e-9);
                    const double phi = std::atan2(dy, dx) / (2.0 * M_PI) - rot;
                    v = p.iris_intensity + p.texture_contrast * texture(t, phi);
                }
            }
            if (lids) {
                const double skin = std::clamp(upper_edge - y + 0.5, 0.0, 1.0) +
                                    std::clamp(y - lower_edge + 0.5, 0.0, 1.0);
                v += std::min(skin, 1.0) * (p.skin_intensity - v);
            }
            v += p.illumination_shift;
            if (p.sensor_noise_sigma > 0.0) v += p.sensor_noise_sigma * noise.gaussian();
            out.at(x, y) = saturate_u8(v);
        }
    }
    return out;
}

void RecaptureParams::validate() const {
    if (halftone_pitch < 0) invalid("halftone pitch must be >= 0");
    if (!(blur_sigma >= 0.0)) invalid("blur sigma must be >= 0");
    if (!(contrast > 0.0 && contrast <= 1.0)) invalid("contrast retention must be in (0,1]");
    if (!(noise_sigma >= 0.0)) invalid("noise sigma must be >= 0");
    if (highlight && !(highlight->radius > 0.0)) invalid("highlight radius must be > 0");
}

GrayImage simulate_print_recapture(const GrayImage& img, const RecaptureParams& rp) {
    rp.validate();
    GrayImage cur = img;
    const int w = img.width();
    const int h = img.height();

    if (rp.halftone_pitch > 0) {
        // One seeded threshold matrix, tiled over the page like a printer's dot screen.
        const int p = rp.halftone_pitch;
        const int cells = p * p;
        std::vector<int> order(static_cast<std::size_t>(cells));
        std::iota(order.begin(), order.end(), 0);
        detail::Rng rng(stable_hash({rp.seed, 0x4854ull}));
        for (int k = cells - 1; k > 0; --k) {
            std::swap(order[static_cast<std::size_t>(k)],
                      order[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(k + 1)))]);
        }
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const int k = (y % p) * p + x % p;
                const double threshold = (order[static_cast<std::size_t>(k)] + 0.5) * 255.0 / cells;
                cur.at(x, y) = img.at(x, y) > threshold ? 255 : 0;
            }
        }
    }

    if (rp.blur_sigma > 0.0) cur = gaussian_blur(cur, rp.blur_sigma);

    if (rp.contrast != 1.0 || rp.noise_sigma > 0.0) {
        detail::Rng rng(stable_hash({rp.seed, 0x4e4full}));
        for (auto& px : cur.pixels()) {
            double v = 128.0 + (px - 128.0) * rp.contrast;
            if (rp.noise_sigma > 0.0) v += rp.noise_sigma * rng.gaussian();
            px = saturate_u8(v);
        }
    }

    if (rp.highlight) {
        const auto& hl = *rp.highlight;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (std::hypot(x - hl.cx, y - hl.cy) <= hl.radius) cur.at(x, y) = saturate_u8(hl.intensity);
            }
        }
    }
    return cur;
}

GrayImage apply_chain(const GrayImage& img, const PreprocessChain& chain) {
    GrayImage cur = img;
    for (const auto& step : chain) {
        switch (step.kind) {
        case PreprocessStep::Kind::HistEq: cur = histogram_equalize(cur); break;
        case PreprocessStep::Kind::Median: cur = median_filter(cur, step.median_radius); break;
        case PreprocessStep::Kind::Open: cur = open(cur, step.se); break;
        case PreprocessStep::Kind::Close: cur = close(cur, step.se); break;
        case PreprocessStep::Kind::TopHat: cur = top_hat(cur, step.se); break;
        }
    }
    return cur;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

int parse_radius(const std::string& text, const std::string& step) {
    try {
        std::size_t used = 0;
        const int r = std::stoi(text, &used);
        if (used == text.size() && r >= 1) return r;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, "bad radius '" + text + "' in chain step '" + step + "'");
}

} // namespace

PreprocessChain parse_chain(const std::string& text) {
    PreprocessChain chain;
    const std::string all = trim(text);
    if (all.empty() || all == "none") return chain;
    for (const auto& raw : split(all, ',')) {
        const std::string step = trim(raw);
        const auto parts = split(step, ':');
        if (parts.empty() || parts[0].empty()) {
            throw Error(ErrorCode::InvalidArgument, "empty step in preprocessing chain '" + text + "'");
        }
        const std::string& op = parts[0];
        if (op == "histeq" && parts.size() == 1) {
            chain.push_back(PreprocessStep::histeq());
        } else if (op == "median" && parts.size() == 2) {
            chain.push_back(PreprocessStep::median(parse_radius(parts[1], step)));
        } else if ((op == "open" || op == "close" || op == "tophat") && parts.size() == 3) {
            const int r = parse_radius(parts[2], step);
            StructuringElement se = StructuringElement::disk(r);
            if (parts[1] == "square") {
                se = StructuringElement::square(r);
            } else if (parts[1] != "disk") {
                throw Error(ErrorCode::InvalidArgument, "unknown structuring element '" + parts[1] + "'");
            }
            if (op == "open") chain.push_back(PreprocessStep::open(se));
            else if (op == "close") chain.push_back(PreprocessStep::close(se));
            else chain.push_back(PreprocessStep::tophat(se));
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown preprocessing step '" + step + "'");
        }
    }
    return chain;
}

std::string format_chain(const PreprocessChain& chain) {
    if (chain.empty()) return "none";
    std::string out;
    for (const auto& step : chain) {
        if (!out.empty()) out += ',';
        const auto se_text = [&] {
            return std::string(step.se.shape() == StructuringElement::Shape::Disk ? "disk:" : "square:") +
                   std::to_string(step.se.radius());
        };
        switch (step.kind) {
        case PreprocessStep::Kind::HistEq: out += "histeq"; break;
        case PreprocessStep::Kind::Median: out += "median:" + std::to_string(step.median_radius); break;
        case PreprocessStep::Kind::Open: out += "open:" + se_text(); break;
        case PreprocessStep::Kind::Close: out += "close:" + se_text(); break;
        case PreprocessStep::Kind::TopHat: out += "tophat:" + se_text(); break;
        }
    }
    return out;
}

// The top-hat leaves a dim residue; equalization stretches it back to a
// printable range.
PreprocessChain default_chain() { return parse_chain("open:disk:3,tophat:square:40,histeq"); }

std::vector<ChainPreset> chain_presets() {
    return {
        {"none", {}},
        {"histeq", parse_chain("histeq")},
        {"median", parse_chain("median:1")},
        {"open-close", parse_chain("open:disk:3,close:disk:3")},
        {"tophat", parse_chain("tophat:square:40")},
        {"open-tophat", default_chain()},
    };
}

RecaptureParams default_recapture() {
    RecaptureParams rp;
    rp.halftone_pitch = 4;
    rp.blur_sigma = 1.5;
    rp.contrast = 0.85;
    rp.noise_sigma = 3.0;
    return rp;
}

std::vector<RecapturePreset> recapture_presets() {
    const auto make = [](int pitch, double blur, double contrast, double noise) {
        RecaptureParams rp;
        rp.halftone_pitch = pitch;
        rp.blur_sigma = blur;
        rp.contrast = contrast;
        rp.noise_sigma = noise;
        return rp;
    };
    return {
        {"identity", RecaptureParams{}},
        {"inkjet-highres", default_recapture()},
        {"inkjet-photo", make(3, 1.2, 0.85, 3.0)},
        {"inkjet-white", make(4, 1.8, 0.75, 4.0)},
        {"laser-white", make(4, 2.0, 0.65, 5.0)},
        {"laser-recycled", make(6, 2.5, 0.6, 6.0)},
    };
}

char eye_code(Eye eye) noexcept { return eye == Eye::Left ? 'L' : 'R'; }

std::string_view kind_name(SampleKind kind) noexcept { return kind == SampleKind::Real ? "real" : "fake"; }

EyeParams sample_eye_params(const EyeDistribution& dist, std::uint64_t seed, int user, Eye eye,
                            int session, int index) {
    const auto u = static_cast<std::uint64_t>(user);
    const auto e = static_cast<std::uint64_t>(eye == Eye::Left ? 0 : 1);
    detail::Rng id(stable_hash({seed, 0x1d, u, e}));

    EyeParams p;
    p.width = dist.width;
    p.height = dist.height;
    const double base_cx = dist.width / 2.0 + id.uniform(-dist.center_spread, dist.center_spread);
    const double base_cy = dist.height / 2.0 + id.uniform(-dist.center_spread, dist.center_spread);
    const double iris_r = id.uniform(dist.iris_r_min, dist.iris_r_max);
    const double pupil_r = id.uniform(dist.pupil_r_min, dist.pupil_r_max);
    const double pdx = id.uniform(-dist.pupil_offset_max, dist.pupil_offset_max);
    const double pdy = id.uniform(-dist.pupil_offset_max, dist.pupil_offset_max);
    p.texture_seed = stable_hash({seed, 0x7e, u, e});
    p.pupil_intensity = 35.0 + id.uniform(-5.0, 5.0);
    p.iris_intensity = 115.0 + id.uniform(-12.0, 12.0);
    p.sclera_intensity = 220.0 + id.uniform(-8.0, 8.0);
    p.skin_intensity = 168.0 + id.uniform(-8.0, 8.0);
    const double coverage = id.uniform(0.0, dist.eyelid_coverage_max);
    p.sensor_noise_sigma = dist.sensor_noise_sigma;

    detail::Rng ses(stable_hash({seed, 0x5e, u, e, static_cast<std::uint64_t>(session),
                                 static_cast<std::uint64_t>(index)}));
    const double tx = ses.uniform(-dist.jitter_translation, dist.jitter_translation);
    const double ty = ses.uniform(-dist.jitter_translation, dist.jitter_translation);
    const double scale = 1.0 + ses.uniform(-dist.jitter_radius_scale, dist.jitter_radius_scale);
    p.texture_rotation_deg = ses.uniform(-dist.jitter_rotation_deg, dist.jitter_rotation_deg);
    p.illumination_shift = ses.uniform(-dist.jitter_illumination, dist.jitter_illumination);
    p.eyelid_coverage = std::clamp(coverage + ses.uniform(-dist.jitter_eyelid, dist.jitter_eyelid), 0.0, 1.0);
    p.noise_seed = stable_hash({seed, 0x5eed, u, e, static_cast<std::uint64_t>(session),
                                static_cast<std::uint64_t>(index)});

    p.iris_cx = base_cx + tx;
    p.iris_cy = base_cy + ty;
    p.iris_r = iris_r * scale;
    p.pupil_cx = p.iris_cx + pdx * scale;
    p.pupil_cy = p.iris_cy + pdy * scale;
    p.pupil_r = pupil_r * scale;
    return p;
}

std::size_t DatasetManifest::count(SampleKind kind) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [kind](const auto& e) { return e.kind == kind; }));
}

std::string manifest_to_csv(const DatasetManifest& manifest) {
    std::ostringstream out;
    out << "user_id,eye,session,idx,kind,path\n";
    for (const auto& e : manifest.entries) {
        out << e.user_id << ',' << eye_code(e.eye) << ',' << e.session << ',' << e.idx << ','
            << kind_name(e.kind) << ',' << e.path << '\n';
    }
    return out.str();
}

DatasetManifest manifest_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    const auto bad = [](std::size_t line_no, const std::string& why) {
        return Error(ErrorCode::ManifestInvalid,
                     "manifest line " + std::to_string(line_no) + ": " + why);
    };
    if (!std::getline(in, line) || trim(line) != "user_id,eye,session,idx,kind,path") {
        throw Error(ErrorCode::ManifestInvalid, "manifest header must be user_id,eye,session,idx,kind,path");
    }
    DatasetManifest m;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 6) throw bad(line_no, "expected 6 fields");
        ManifestEntry e;
        try {
            std::size_t used = 0;
            e.user_id = std::stoi(f[0], &used);
            if (used != f[0].size() || e.user_id < 0) throw bad(line_no, "bad user_id");
            e.session = std::stoi(f[2], &used);
            if (used != f[2].size()) throw bad(line_no, "bad session");
            e.idx = std::stoi(f[3], &used);
            if (used != f[3].size() || e.idx < 1) throw bad(line_no, "bad idx");
        } catch (const std::logic_error&) {
            throw bad(line_no, "non-numeric field");
        }
        if (f[1] == "L") e.eye = Eye::Left;
        else if (f[1] == "R") e.eye = Eye::Right;
        else throw bad(line_no, "eye must be L or R");
        if (e.session != 1 && e.session != 2) throw bad(line_no, "session must be 1 or 2");
        if (f[4] == "real") e.kind = SampleKind::Real;
        else if (f[4] == "fake") e.kind = SampleKind::Fake;
        else throw bad(line_no, "kind must be real or fake");
        if (f[5].empty()) throw bad(line_no, "empty path");
        e.path = f[5];
        m.entries.push_back(std::move(e));
    }
    return m;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return manifest_from_csv(std::string(bytes.begin(), bytes.end()));
}

DatasetManifest build_dataset(const DatasetSpec& spec, const std::filesystem::path& out_dir) {
    if (spec.n_users < 1) invalid("dataset needs at least one user");
    if (spec.sessions < 1 || spec.sessions > 2) invalid("sessions must be 1 or 2");
    if (spec.images_per_session < 1) invalid("images per session must be >= 1");
    spec.recapture.validate();

    struct Capture {
        int user;
        Eye eye;
        int session;
        int idx;
    };
    std::vector<Capture> captures;
    for (int u = 1; u <= spec.n_users; ++u) {
        for (Eye eye : {Eye::Left, Eye::Right}) {
            for (int s = 1; s <= spec.sessions; ++s) {
                for (int i = 1; i <= spec.images_per_session; ++i) captures.push_back({u, eye, s, i});
            }
        }
    }

    const auto rel_path = [](const Capture& c, SampleKind kind) {
        return "u" + std::to_string(c.user) + "/" + eye_code(c.eye) + "/" + std::string(kind_name(kind)) +
               "/s" + std::to_string(c.session) + "_" + std::to_string(c.idx) + ".pgm";
    };

    std::error_code ec;
    for (int u = 1; u <= spec.n_users; ++u) {
        for (Eye eye : {Eye::Left, Eye::Right}) {
            for (SampleKind k : {SampleKind::Real, SampleKind::Fake}) {
                const auto dir = out_dir / ("u" + std::to_string(u)) / std::string(1, eye_code(eye)) /
                                 std::string(kind_name(k));
                std::filesystem::create_directories(dir, ec);
                if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
            }
        }
    }

    detail::parallel_for(captures.size(), spec.jobs, [&](std::size_t i) {
        const auto& c = captures[i];
        const EyeParams params = sample_eye_params(spec.distribution, spec.seed, c.user, c.eye, c.session, c.idx);
        const GrayImage real = render_synthetic_eye(params);
        RecaptureParams rp = spec.recapture;
        rp.seed = stable_hash({spec.seed, 0xFA4Eull, static_cast<std::uint64_t>(c.user),
                               static_cast<std::uint64_t>(c.eye == Eye::Left ? 0 : 1),
                               static_cast<std::uint64_t>(c.session), static_cast<std::uint64_t>(c.idx),
                               spec.recapture.seed});
        const GrayImage fake = simulate_print_recapture(apply_chain(real, spec.chain), rp);
        write_pgm_file(out_dir / rel_path(c, SampleKind::Real), real);
        write_pgm_file(out_dir / rel_path(c, SampleKind::Fake), fake);
    });

    DatasetManifest manifest;
    for (const auto& c : captures) {
        for (SampleKind k : {SampleKind::Real, SampleKind::Fake}) {
            manifest.entries.push_back({c.user, c.eye, c.session, c.idx, k, rel_path(c, k)});
        }
    }
    const std::string csv = manifest_to_csv(manifest);
    write_file_bytes(out_dir / "manifest.csv",
                     std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
    return manifest;
}

} // namespace iris
