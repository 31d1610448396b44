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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "iris/filters.hpp"
#include "iris/image.hpp"

namespace iris {

struct EyeParams {
    int width = 320;
    int height = 280;
    double iris_cx = 160.0;
    double iris_cy = 140.0;
    double iris_r = 90.0;
    double pupil_cx = 160.0;
    double pupil_cy = 140.0;
    double pupil_r = 30.0;

    std::uint64_t texture_seed = 1;
    std::array<double, 4> octave_weights{1.0, 0.8, 0.6, 0.45};
    double texture_contrast = 45.0;   ///< peak texture deviation, gray levels
    double texture_rotation_deg = 0.0;

    /// Fraction of the iris diameter hidden by the upper lid; the lower lid
    /// covers half as much.
    double eyelid_coverage = 0.0;

    double pupil_intensity = 35.0;
    double iris_intensity = 115.0;
    double sclera_intensity = 220.0;
    double skin_intensity = 168.0;
    double illumination_shift = 0.0;

    double sensor_noise_sigma = 0.0;
    std::uint64_t noise_seed = 0;

    /// Throws InvalidArgument unless the pupil is strictly inside the iris
    /// and pupil < iris < sclera in intensity.
    void validate() const;
};

GrayImage render_synthetic_eye(const EyeParams& params);

struct Highlight {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    double intensity = 255.0;
};

struct RecaptureParams {
    int halftone_pitch = 0;        ///< 0 disables halftoning
    double blur_sigma = 0.0;       ///< 0 disables the optical blur
    double contrast = 1.0;         ///< retention toward mid-gray, (0,1]
    double noise_sigma = 0.0;      ///< additive Gaussian, gray levels
    std::optional<Highlight> highlight;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Halftone, blur, contrast compression, noise, optional highlight; a pure
/// function of (img, params).
GrayImage simulate_print_recapture(const GrayImage& img, const RecaptureParams& params);

struct PreprocessStep {
    enum class Kind { HistEq, Median, Open, Close, TopHat };

    Kind kind = Kind::HistEq;
    int median_radius = 1;
    StructuringElement se = StructuringElement::disk(3);

    static PreprocessStep histeq() { return {Kind::HistEq, 1, StructuringElement::disk(3)}; }
    static PreprocessStep median(int r) { return {Kind::Median, r, StructuringElement::disk(3)}; }
    static PreprocessStep open(StructuringElement se) { return {Kind::Open, 1, se}; }
    static PreprocessStep close(StructuringElement se) { return {Kind::Close, 1, se}; }
    static PreprocessStep tophat(StructuringElement se) { return {Kind::TopHat, 1, se}; }
};

using PreprocessChain = std::vector<PreprocessStep>;

GrayImage apply_chain(const GrayImage& img, const PreprocessChain& chain);

/// Parses "open:disk:3,tophat:square:40", "median:1", "histeq" or "" (empty
/// chain). Throws ConfigError on malformed text.
PreprocessChain parse_chain(const std::string& text);
std::string format_chain(const PreprocessChain& chain);

struct ChainPreset {
    std::string name;
    PreprocessChain chain;
};

struct RecapturePreset {
    std::string name;
    RecaptureParams params;
};

std::vector<ChainPreset> chain_presets();
std::vector<RecapturePreset> recapture_presets();
PreprocessChain default_chain();
RecaptureParams default_recapture();

/// Per-identity geometry ranges plus per-session jitter magnitudes.
struct EyeDistribution {
    int width = 320;
    int height = 280;
    double center_spread = 12.0;
    double iris_r_min = 78.0;
    double iris_r_max = 100.0;
    double pupil_r_min = 24.0;
    double pupil_r_max = 36.0;
    double pupil_offset_max = 4.0;
    double eyelid_coverage_max = 0.12;
    double sensor_noise_sigma = 3.0;

    double jitter_translation = 3.0;
    double jitter_radius_scale = 0.02;
    double jitter_rotation_deg = 3.0;
    double jitter_illumination = 5.0;
    double jitter_eyelid = 0.05;
};

enum class Eye { Left, Right };
enum class SampleKind { Real, Fake };

char eye_code(Eye eye) noexcept;
std::string_view kind_name(SampleKind kind) noexcept;

/// Stable 64-bit mixing of seed material; used for every per-image seed so
/// results do not depend on generation order.
std::uint64_t stable_hash(std::initializer_list<std::uint64_t> parts) noexcept;

/// Eye parameters of one capture: identity from (seed, user, eye), jitter
/// from the session and index.
EyeParams sample_eye_params(const EyeDistribution& dist, std::uint64_t seed, int user, Eye eye,
                            int session, int index);

struct ManifestEntry {
    int user_id = 0;
    Eye eye = Eye::Left;
    int session = 1;
    int idx = 1;
    SampleKind kind = SampleKind::Real;
    std::string path; ///< relative to the manifest directory

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    std::size_t count(SampleKind kind) const noexcept;
};

/// CSV header: user_id,eye,session,idx,kind,path
std::string manifest_to_csv(const DatasetManifest& manifest);
DatasetManifest manifest_from_csv(const std::string& text);
DatasetManifest read_manifest(const std::filesystem::path& path);

struct DatasetSpec {
    int n_users = 27;
    int sessions = 2;
    int images_per_session = 4;
    EyeDistribution distribution;
    RecaptureParams recapture = default_recapture();
    PreprocessChain chain = default_chain();
    std::uint64_t seed = 7;
    int jobs = 1;
};

/// Renders every real capture and its fake, writes
/// u<user>/<eye>/<kind>/s<session>_<idx>.pgm and manifest.csv under out_dir.
DatasetManifest build_dataset(const DatasetSpec& spec, const std::filesystem::path& out_dir);

} // namespace iris
