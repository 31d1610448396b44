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

#include "iris/config.hpp"

#include <sstream>
#include <utility>

#include "iris/error.hpp"
#include "iris/pgm.hpp"

namespace iris {

namespace {

const std::vector<std::pair<std::string, std::string>>& defaults() {
    static const std::vector<std::pair<std::string, std::string>> d = {
        {"segmentation.pupil_r_min", "20"},
        {"segmentation.pupil_r_max", "70"},
        {"segmentation.iris_r_min", "60"},
        {"segmentation.iris_r_max", "150"},
        {"segmentation.max_pupil_iris_ratio", "0.75"},
        {"segmentation.min_peak", "0.35"},
        {"segmentation.detect_eyelids", "true"},
        {"segmentation.min_line_votes_fraction", "0.5"},
        {"canny.sigma", "2.0"},
        {"canny.low", "0.2"},
        {"canny.high", "0.5"},
        {"canny.eyelid_high", "0.3"},
        {"normalization.radial_res", "20"},
        {"normalization.angular_res", "240"},
        {"normalization.eyelash_threshold", "off"},
        {"encoding.wavelength", "18"},
        {"encoding.sigma_over_f", "0.5"},
        {"encoding.min_amplitude", "0.0001"},
        {"matching.shift_budget", "8"},
        {"recapture.preset", "inkjet-highres"},
        {"recapture.halftone_pitch", "preset"},
        {"recapture.blur_sigma", "preset"},
        {"recapture.contrast", "preset"},
        {"recapture.noise_sigma", "preset"},
        {"recapture.highlight", "none"},
        {"chain.steps", "open-tophat"},
        {"protocol.seed", "1"},
        {"protocol.far_targets", "0.1,1,2,5"},
    };
    return d;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    config_error("'" + key + "' expects a number, got '" + v + "'");
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long i = std::stoll(v, &used);
        if (used == v.size()) return i;
    } catch (const std::exception&) {
    }
    config_error("'" + key + "' expects an integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    config_error("'" + key + "' expects true or false, got '" + v + "'");
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) out.push_back(trim(part));
    return out;
}

} // namespace

Config::Config() {
    for (const auto& [k, v] : defaults()) values_[k] = v;
}

const std::vector<std::string>& Config::known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [key, value] : defaults()) k.push_back(key);
        return k;
    }();
    return keys;
}

void Config::set(const std::string& key, const std::string& value) {
    const auto it = values_.find(key);
    if (it == values_.end()) config_error("unknown config key '" + key + "'");
    it->second = trim(value);
}

const std::string& Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) config_error("unknown config key '" + key + "'");
    return it->second;
}

void Config::merge_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            config_error("config line " + std::to_string(line_no) + ": expected 'section.key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.find('.') == std::string::npos) {
            config_error("config line " + std::to_string(line_no) + ": key '" + key + "' needs a section");
        }
        set(key, line.substr(eq + 1));
    }
}

Config Config::from_text(const std::string& text) {
    Config c;
    c.merge_text(text);
    return c;
}

Config Config::from_file(const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes;
    try {
        bytes = read_file_bytes(path);
    } catch (const Error& e) {
        config_error(e.what());
    }
    return from_text(std::string(bytes.begin(), bytes.end()));
}

PipelineConfig Config::pipeline() const {
    PipelineConfig p;
    auto& s = p.segmentation;
    s.pupil_r_min = static_cast<int>(to_int("segmentation.pupil_r_min", get("segmentation.pupil_r_min")));
    s.pupil_r_max = static_cast<int>(to_int("segmentation.pupil_r_max", get("segmentation.pupil_r_max")));
    s.iris_r_min = static_cast<int>(to_int("segmentation.iris_r_min", get("segmentation.iris_r_min")));
    s.iris_r_max = static_cast<int>(to_int("segmentation.iris_r_max", get("segmentation.iris_r_max")));
    s.max_pupil_iris_ratio =
        to_double("segmentation.max_pupil_iris_ratio", get("segmentation.max_pupil_iris_ratio"));
    s.min_peak = to_double("segmentation.min_peak", get("segmentation.min_peak"));
    s.detect_eyelids = to_bool("segmentation.detect_eyelids", get("segmentation.detect_eyelids"));
    s.min_line_votes_fraction =
        to_double("segmentation.min_line_votes_fraction", get("segmentation.min_line_votes_fraction"));
    s.canny.sigma = to_double("canny.sigma", get("canny.sigma"));
    s.canny.low = to_double("canny.low", get("canny.low"));
    s.canny.high = to_double("canny.high", get("canny.high"));
    s.eyelid_canny_high = to_double("canny.eyelid_high", get("canny.eyelid_high"));

    auto& n = p.normalization;
    n.radial_res = static_cast<int>(to_int("normalization.radial_res", get("normalization.radial_res")));
    n.angular_res = static_cast<int>(to_int("normalization.angular_res", get("normalization.angular_res")));
    const auto& lash = get("normalization.eyelash_threshold");
    if (lash != "off") n.eyelash_threshold = static_cast<int>(to_int("normalization.eyelash_threshold", lash));

    p.encoding.wavelength = to_double("encoding.wavelength", get("encoding.wavelength"));
    p.encoding.sigma_over_f = to_double("encoding.sigma_over_f", get("encoding.sigma_over_f"));
    p.encoding.min_amplitude = to_double("encoding.min_amplitude", get("encoding.min_amplitude"));
    p.shift_budget = static_cast<int>(to_int("matching.shift_budget", get("matching.shift_budget")));
    return p;
}

RecaptureParams Config::recapture() const {
    const auto& name = get("recapture.preset");
    std::optional<RecaptureParams> base;
    for (const auto& preset : recapture_presets()) {
        if (preset.name == name) base = preset.params;
    }
    if (!base) config_error("unknown recapture preset '" + name + "'");
    RecaptureParams rp = *base;
    const auto override_value = [&](const char* key, auto apply) {
        const auto& v = get(key);
        if (v != "preset") apply(v);
    };
    override_value("recapture.halftone_pitch",
                   [&](const std::string& v) { rp.halftone_pitch = static_cast<int>(to_int("recapture.halftone_pitch", v)); });
    override_value("recapture.blur_sigma",
                   [&](const std::string& v) { rp.blur_sigma = to_double("recapture.blur_sigma", v); });
    override_value("recapture.contrast",
                   [&](const std::string& v) { rp.contrast = to_double("recapture.contrast", v); });
    override_value("recapture.noise_sigma",
                   [&](const std::string& v) { rp.noise_sigma = to_double("recapture.noise_sigma", v); });
    const auto& hl = get("recapture.highlight");
    if (hl != "none") {
        const auto parts = split_commas(hl);
        if (parts.size() != 4) config_error("recapture.highlight expects 'cx,cy,radius,intensity' or none");
        rp.highlight = Highlight{to_double("recapture.highlight", parts[0]), to_double("recapture.highlight", parts[1]),
                                 to_double("recapture.highlight", parts[2]), to_double("recapture.highlight", parts[3])};
    }
    return rp;
}

PreprocessChain Config::chain() const {
    const auto& v = get("chain.steps");
    for (const auto& preset : chain_presets()) {
        if (preset.name == v) return preset.chain;
    }
    return parse_chain(v);
}

std::uint64_t Config::protocol_seed() const {
    const long long s = to_int("protocol.seed", get("protocol.seed"));
    if (s < 0) config_error("protocol.seed must be >= 0");
    return static_cast<std::uint64_t>(s);
}

std::vector<double> Config::far_targets() const {
    std::vector<double> out;
    const auto& v = get("protocol.far_targets");
    if (trim(v).empty()) return out;
    for (const auto& part : split_commas(v)) {
        const double t = to_double("protocol.far_targets", part);
        if (!(t >= 0.0 && t <= 100.0)) config_error("FAR targets must be percentages in [0,100]");
        out.push_back(t);
    }
    return out;
}

void Config::validate() const {
    try {
        pipeline().validate();
        recapture().validate();
        (void)chain();
        (void)protocol_seed();
        (void)far_targets();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        config_error(e.what());
    }
}

std::string Config::dump() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

} // namespace iris
