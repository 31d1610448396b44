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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "iris/encoding.hpp"
#include "iris/normalization.hpp"
#include "iris/segmentation.hpp"
#include "iris/spoofsim.hpp"

namespace iris {

/// A subject is one eye of one user.
struct SubjectId {
    int user_id = 0;
    Eye eye = Eye::Left;

    friend auto operator<=>(const SubjectId&, const SubjectId&) = default;
};

std::string subject_label(const SubjectId& s);

enum class ScoreKind { Genuine, Impostor, Attack1, Attack2 };
std::string_view score_kind_name(ScoreKind kind) noexcept;

struct Comparison {
    ScoreKind kind = ScoreKind::Genuine;
    SubjectId subject_a;
    SubjectId subject_b;
    double hd = 0.0;
    int shift = 0;
};

/// Bookkeeping for one comparison family.
struct PairTally {
    std::size_t implied = 0;   ///< pairs the protocol asks for given the manifest
    std::size_t excluded = 0;  ///< dropped because an image failed segmentation/encoding
    std::size_t failed = 0;    ///< attempted but every shift was fully masked
    std::size_t scored = 0;
};

struct FailureTally {
    std::size_t subjects = 0;
    std::size_t real_images = 0;
    std::size_t fake_images = 0;
    std::size_t real_segmented = 0;
    std::size_t fake_segmented = 0;
    std::size_t real_segmentation_failures = 0;
    std::size_t fake_segmentation_failures = 0;
    std::size_t real_encoding_failures = 0;
    std::size_t fake_encoding_failures = 0;
    PairTally genuine;
    PairTally impostor;
    PairTally attack1;
    PairTally attack2;
};

struct ScoreSet {
    std::vector<Comparison> genuine;
    std::vector<Comparison> impostor;
    std::vector<Comparison> attack1;
    std::vector<Comparison> attack2;
    FailureTally failures;

    /// Builds a score set from bare hd values; used for arithmetic replays.
    static ScoreSet from_values(const std::vector<double>& genuine,
                                const std::vector<double>& impostor,
                                const std::vector<double>& attack1 = {},
                                const std::vector<double>& attack2 = {});
};

struct PipelineConfig {
    SegmentationConfig segmentation;
    NormalizationConfig normalization;
    LogGaborParams encoding;
    int shift_budget = 8;

    void validate() const;
};

struct ProtocolConfig {
    PipelineConfig pipeline;
    std::uint64_t protocol_seed = 1;
    int jobs = 1;
};

/// Segment, normalize and encode one image.
IrisTemplate extract_template(const GrayImage& img, const PipelineConfig& config);

/// NOM genuine (all session-1 x session-2 pairs per subject), one seeded
/// impostor pair per ordered subject pair, Attack 1 (fake x fake) and
/// Attack 2 (real session 1 x fake session 2). Paths resolve against base_dir.
ScoreSet run_protocol(const DatasetManifest& manifest, const std::filesystem::path& base_dir,
                      const ProtocolConfig& config);

struct RateResult {
    double far = 0.0; ///< percent
    double frr = 0.0; ///< percent
};

/// Accept iff hd <= threshold.
RateResult far_frr_at(const ScoreSet& scores, double threshold);

struct SuccessRates {
    double sr_attack1 = 0.0; ///< percent
    double sr_attack2 = 0.0; ///< percent
};

SuccessRates success_rates(const ScoreSet& scores, double threshold);

struct OperatingPoint {
    double target_far = 0.0;
    double threshold = 0.0;
    double far = 0.0;
    double frr = 0.0;
    double sr_attack1 = 0.0;
    double sr_attack2 = 0.0;
};

/// Candidate thresholds: below the smallest impostor score, midpoints of
/// consecutive distinct impostor scores, above the largest. Ascending.
std::vector<double> candidate_thresholds(const ScoreSet& scores);

/// Largest candidate threshold whose FAR does not exceed target_far.
/// Attack rates are left at zero when the attack sets are empty.
OperatingPoint threshold_at_far(const ScoreSet& scores, double target_far);

struct DetSample {
    double threshold = 0.0;
    double far = 0.0;
    double frr = 0.0;
};

struct ScoreStats {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

ScoreStats score_stats(const std::vector<Comparison>& scores);

struct EvaluationReport {
    std::size_t real_images = 0;
    std::size_t fake_images = 0;
    std::size_t subjects = 0;
    double real_segmentation_rate = 0.0; ///< percent
    double fake_segmentation_rate = 0.0; ///< percent
    FailureTally failures;
    ScoreStats genuine;
    ScoreStats impostor;
    ScoreStats attack1;
    ScoreStats attack2;
    double eer = 0.0; ///< percent, NOM
    std::vector<OperatingPoint> operating_points;
    std::vector<DetSample> det;
};

inline constexpr int kReportSchemaVersion = 1;

EvaluationReport build_report(const ScoreSet& scores, const std::vector<double>& targets);

/// Equal error rate over the candidate grid: the smallest max(far, frr).
double equal_error_rate(const ScoreSet& scores);

std::string report_to_json(const EvaluationReport& report);
/// Aligned NOM / Attack 1 / Attack 2 table.
std::string report_to_table(const EvaluationReport& report);

/// kind,subject_a,subject_b,hd,shift in canonical order.
std::string scores_to_csv(const ScoreSet& scores);

/// 100 * part / whole, or 0 when whole is 0.
double percent(std::size_t part, std::size_t whole) noexcept;

} // namespace iris
