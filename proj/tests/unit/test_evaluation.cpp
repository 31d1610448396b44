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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "iris/error.hpp"
#include "iris/evaluation.hpp"
#include "iris/matching.hpp"
#include "iris/pgm.hpp"
#include "iris/spoofsim.hpp"

using namespace iris;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

fs::path scratch_dir(const std::string& tag) {
    const auto p = fs::temp_directory_path() / ("irisattack_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// Counts accepted scores the slow way.
double accept_pct(const std::vector<double>& v, double t) {
    const auto n = std::count_if(v.begin(), v.end(), [&](double x) { return x <= t; });
    return 100.0 * static_cast<double>(n) / static_cast<double>(v.size());
}

std::vector<double> uniform_scores(std::mt19937_64& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = std::round(d(rng) * 1e4) / 1e4; // coarse grid forces ties
    return v;
}

} // namespace

TEST(Rates, FarFrrExamples) {
    const auto s = ScoreSet::from_values({0.20, 0.30}, {0.45, 0.55});
    auto r = far_frr_at(s, 0.40);
    EXPECT_DOUBLE_EQ(r.far, 0.0);
    EXPECT_DOUBLE_EQ(r.frr, 0.0);
    r = far_frr_at(s, 0.50);
    EXPECT_DOUBLE_EQ(r.far, 50.0);
    EXPECT_DOUBLE_EQ(r.frr, 0.0);
    r = far_frr_at(s, 0.10);
    EXPECT_DOUBLE_EQ(r.far, 0.0);
    EXPECT_DOUBLE_EQ(r.frr, 100.0);
}

TEST(Rates, AcceptanceIsInclusive) {
    const auto s = ScoreSet::from_values({0.30}, {0.30});
    const auto r = far_frr_at(s, 0.30);
    EXPECT_DOUBLE_EQ(r.far, 100.0);
    EXPECT_DOUBLE_EQ(r.frr, 0.0);
}

TEST(Rates, EmptySetsRaise) {
    EXPECT_EQ(code_of([] { far_frr_at(ScoreSet::from_values({}, {0.4}), 0.3); }), ErrorCode::EmptyScores);
    EXPECT_EQ(code_of([] { far_frr_at(ScoreSet::from_values({0.2}, {}), 0.3); }), ErrorCode::EmptyScores);
    EXPECT_EQ(code_of([] { success_rates(ScoreSet::from_values({0.2}, {0.4}, {0.3}), 0.3); }),
              ErrorCode::EmptyScores);
    EXPECT_EQ(code_of([] { threshold_at_far(ScoreSet::from_values({0.2}, {}), 1.0); }), ErrorCode::EmptyScores);
}

TEST(Rates, FromValuesRejectsOutOfRange) {
    EXPECT_EQ(code_of([] { ScoreSet::from_values({1.5}, {0.4}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { ScoreSet::from_values({0.2}, {-0.1}); }), ErrorCode::InvalidArgument);
}

TEST(Rates, MonotoneOverSweep) {
    std::mt19937_64 rng(11);
    const auto s = ScoreSet::from_values(uniform_scores(rng, 300, 0.0, 0.45), uniform_scores(rng, 500, 0.3, 0.6));
    double prev_far = -1.0, prev_frr = 101.0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = i / 1000.0;
        const auto r = far_frr_at(s, t);
        EXPECT_GE(r.far, prev_far);
        EXPECT_LE(r.frr, prev_frr);
        prev_far = r.far;
        prev_frr = r.frr;
    }
}

TEST(Rates, SuccessRates) {
    const auto s = ScoreSet::from_values({0.2}, {0.5}, {0.1, 0.3, 0.35, 0.6}, {0.25, 0.45});
    auto sr = success_rates(s, 0.32);
    EXPECT_DOUBLE_EQ(sr.sr_attack1, 50.0);
    EXPECT_DOUBLE_EQ(sr.sr_attack2, 50.0);
    sr = success_rates(s, 1.0);
    EXPECT_DOUBLE_EQ(sr.sr_attack1, 100.0);
    EXPECT_DOUBLE_EQ(sr.sr_attack2, 100.0);
    sr = success_rates(s, 0.05);
    EXPECT_DOUBLE_EQ(sr.sr_attack1, 0.0);
    EXPECT_DOUBLE_EQ(sr.sr_attack2, 0.0);
}

// A fake-genuine FRR of 25.93% (7 of 27 rejected) is an SR of 74.07%;
// 146 of 221 accepted fake-vs-real matchings is an SR of 66.06%.
TEST(Rates, SuccessRateIsComplementOfFakeFrr) {
    std::vector<double> a1(27, 0.2), a2(221, 0.2);
    std::fill(a1.begin(), a1.begin() + 7, 0.6);
    std::fill(a2.begin(), a2.begin() + 75, 0.6);
    const auto sr = success_rates(ScoreSet::from_values({0.2}, {0.5}, a1, a2), 0.4);
    EXPECT_NEAR(sr.sr_attack1, 74.07, 0.005);
    EXPECT_NEAR(sr.sr_attack2, 66.06, 0.005);
}

TEST(Threshold, CandidateGrid) {
    const auto s = ScoreSet::from_values({0.1}, {0.40, 0.30, 0.40, 0.50});
    const auto c = candidate_thresholds(s);
    ASSERT_EQ(c.size(), 4u);
    EXPECT_LT(c[0], 0.30);
    EXPECT_DOUBLE_EQ(c[1], 0.35);
    EXPECT_DOUBLE_EQ(c[2], 0.45);
    EXPECT_GT(c[3], 0.50);
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
}

TEST(Threshold, TwentyPercentOfFive) {
    const auto s = ScoreSet::from_values({0.1}, {0.30, 0.35, 0.40, 0.45, 0.50});
    const auto op = threshold_at_far(s, 20.0);
    EXPECT_DOUBLE_EQ(op.threshold, 0.325);
    EXPECT_DOUBLE_EQ(op.far, 20.0);
    EXPECT_DOUBLE_EQ(op.frr, 0.0);
}

TEST(Threshold, Extremes) {
    const auto s = ScoreSet::from_values({0.1}, {0.30, 0.35, 0.40, 0.45, 0.50});
    auto op = threshold_at_far(s, 0.0);
    EXPECT_LT(op.threshold, 0.30);
    EXPECT_DOUBLE_EQ(op.far, 0.0);
    op = threshold_at_far(s, 100.0);
    EXPECT_GT(op.threshold, 0.50);
    EXPECT_DOUBLE_EQ(op.far, 100.0);
    EXPECT_EQ(code_of([&] { threshold_at_far(s, 101.0); }), ErrorCode::InvalidArgument);
}

// Realized FAR meets the target and the next candidate up would not.
TEST(Threshold, ContractOnRandomSets) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto gen = uniform_scores(rng, 50 + trial * 7, 0.05, 0.4);
        const auto imp = uniform_scores(rng, 80 + trial * 13, 0.3, 0.6);
        const auto s = ScoreSet::from_values(gen, imp);
        const auto grid = candidate_thresholds(s);
        for (double target : {0.1, 1.0, 2.0, 5.0, 37.5}) {
            const auto op = threshold_at_far(s, target);
            EXPECT_LE(op.far, target);
            EXPECT_DOUBLE_EQ(op.far, accept_pct(imp, op.threshold));
            EXPECT_DOUBLE_EQ(op.frr, 100.0 - accept_pct(gen, op.threshold));
            const auto it = std::upper_bound(grid.begin(), grid.end(), op.threshold);
            if (it != grid.end()) EXPECT_GT(accept_pct(imp, *it), target);
        }
    }
}

TEST(Threshold, AttackRatesAtOperatingPoint) {
    const auto s = ScoreSet::from_values({0.2, 0.6}, {0.30, 0.35, 0.40, 0.45, 0.50}, {0.1, 0.33}, {0.34, 0.9});
    const auto op = threshold_at_far(s, 20.0);
    EXPECT_DOUBLE_EQ(op.frr, 50.0);
    EXPECT_DOUBLE_EQ(op.sr_attack1, 50.0);
    EXPECT_DOUBLE_EQ(op.sr_attack2, 0.0);
}

TEST(Eer, HandComputed) {
    // Grid: <0.25, 0.375, 0.55, 0.65, >0.7; at 0.375 FAR 25 and FRR 25.
    const auto s = ScoreSet::from_values({0.1, 0.2, 0.3, 0.4}, {0.25, 0.5, 0.6, 0.7});
    EXPECT_DOUBLE_EQ(equal_error_rate(s), 25.0);
    EXPECT_DOUBLE_EQ(equal_error_rate(ScoreSet::from_values({0.1, 0.2}, {0.4, 0.5})), 0.0);
}

TEST(Eer, MatchesBruteForceOverGrid) {
    std::mt19937_64 rng(17);
    const auto gen = uniform_scores(rng, 200, 0.1, 0.45);
    const auto imp = uniform_scores(rng, 200, 0.3, 0.6);
    const auto s = ScoreSet::from_values(gen, imp);
    std::vector<double> sorted = imp;
    std::sort(sorted.begin(), sorted.end());
    double best = 100.0;
    const auto consider = [&](double t) {
        best = std::min(best, std::max(accept_pct(imp, t), 100.0 - accept_pct(gen, t)));
    };
    consider(sorted.front() - 1e-9);
    consider(sorted.back() + 1e-9);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] != sorted[i - 1]) consider(0.5 * (sorted[i] + sorted[i - 1]));
    }
    EXPECT_DOUBLE_EQ(equal_error_rate(s), best);
}

TEST(Report, OperatingPointsAscending) {
    std::mt19937_64 rng(3);
    const auto s = ScoreSet::from_values(uniform_scores(rng, 400, 0.05, 0.4), uniform_scores(rng, 2000, 0.3, 0.6),
                                         uniform_scores(rng, 100, 0.1, 0.5), uniform_scores(rng, 100, 0.2, 0.55));
    const auto rep = build_report(s, {5.0, 0.1, 2.0, 1.0});
    ASSERT_EQ(rep.operating_points.size(), 4u);
    EXPECT_DOUBLE_EQ(rep.operating_points[0].target_far, 0.1);
    EXPECT_DOUBLE_EQ(rep.operating_points[3].target_far, 5.0);
    for (std::size_t i = 1; i < 4; ++i) {
        EXPECT_LE(rep.operating_points[i - 1].threshold, rep.operating_points[i].threshold);
    }
    EXPECT_FALSE(rep.det.empty());
    EXPECT_TRUE(std::is_sorted(rep.det.begin(), rep.det.end(),
                               [](const DetSample& a, const DetSample& b) { return a.threshold < b.threshold; }));
}

TEST(Report, EmptyTargetsGivesDetOnly) {
    const auto rep = build_report(ScoreSet::from_values({0.1, 0.2}, {0.4, 0.5}), {});
    EXPECT_TRUE(rep.operating_points.empty());
    EXPECT_EQ(rep.det.size(), 3u);
}

TEST(Report, SegmentationRates) {
    auto s = ScoreSet::from_values({0.1}, {0.5});
    s.failures.fake_images = 432;
    s.failures.fake_segmented = 166;
    s.failures.real_images = 432;
    s.failures.real_segmented = 348;
    const auto rep = build_report(s, {});
    EXPECT_NEAR(rep.fake_segmentation_rate, 38.43, 0.005);
    EXPECT_NEAR(rep.real_segmentation_rate, 80.56, 0.005);
}

TEST(Report, JsonDocument) {
    const auto s = ScoreSet::from_values({0.1, 0.2, 0.35}, {0.3, 0.4, 0.5}, {0.2}, {0.45});
    const auto doc = nlohmann::json::parse(report_to_json(build_report(s, {1.0, 50.0})));
    EXPECT_EQ(doc["schema"], "irisattack.report");
    EXPECT_EQ(doc["version"], kReportSchemaVersion);
    ASSERT_EQ(doc["operating_points"].size(), 2u);
    EXPECT_DOUBLE_EQ(doc["operating_points"][1]["threshold"].get<double>(), 0.35);
    EXPECT_DOUBLE_EQ(doc["operating_points"][1]["sr_attack1"].get<double>(), 100.0);
    EXPECT_DOUBLE_EQ(doc["operating_points"][1]["sr_attack2"].get<double>(), 0.0);
    EXPECT_EQ(doc["scores"]["genuine"]["count"], 3);
    EXPECT_EQ(doc["comparisons"]["impostor"]["scored"], 3);
    EXPECT_EQ(doc["det"].size(), 4u);
}

TEST(Report, TableColumns) {
    const auto s = ScoreSet::from_values({0.1, 0.2, 0.35}, {0.3, 0.4, 0.5}, {0.2}, {0.45});
    const auto table = report_to_table(build_report(s, {50.0}));
    std::istringstream in(table);
    std::string line;
    bool header = false, row = false;
    while (std::getline(in, line)) {
        if (line.rfind("NOM", 0) == 0) {
            header = line.find("Attack 1") < line.find("Attack 2");
        }
        if (line.rfind("50.00 - 0.00", 0) == 0) {
            row = line.find("100.00") != std::string::npos && line.find("0.350000") != std::string::npos;
        }
    }
    EXPECT_TRUE(header) << table;
    EXPECT_TRUE(row) << table;
}

TEST(Report, ScoresCsvCanonical) {
    ScoreSet a;
    a.genuine = {{ScoreKind::Genuine, {2, Eye::Left}, {2, Eye::Left}, 0.25, 1},
                 {ScoreKind::Genuine, {1, Eye::Right}, {1, Eye::Right}, 0.125, -2}};
    a.impostor = {{ScoreKind::Impostor, {1, Eye::Right}, {2, Eye::Left}, 0.5, 0}};
    ScoreSet b = a;
    std::reverse(b.genuine.begin(), b.genuine.end());
    const auto csv = scores_to_csv(a);
    EXPECT_EQ(csv, scores_to_csv(b));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "kind,subject_a,subject_b,hd,shift");
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, 8), "genuine,");
    EXPECT_NE(line.find(",0.125000,-2"), std::string::npos) << line;
    std::getline(in, line);
    EXPECT_NE(line.find(",0.250000,1"), std::string::npos) << line;
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, 9), "impostor,");
}

TEST(Report, StatsAreExact) {
    ScoreSet s = ScoreSet::from_values({0.1, 0.3}, {0.5});
    const auto st = score_stats(s.genuine);
    EXPECT_EQ(st.count, 2u);
    EXPECT_DOUBLE_EQ(st.mean, 0.2);
    EXPECT_NEAR(st.stddev, 0.1, 1e-12);
    EXPECT_DOUBLE_EQ(st.min, 0.1);
    EXPECT_DOUBLE_EQ(st.max, 0.3);
}

// Two subjects (one user, both eyes) x 2 sessions x 2 images. Fakes are byte
// copies of the real captures, so every attack score must reproduce a
// genuine score for the same image pair.
class Protocol : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = scratch_dir("protocol");
        EyeDistribution dist;
        dist.eyelid_coverage_max = 0.0;
        for (Eye eye : {Eye::Left, Eye::Right}) {
            for (int session = 1; session <= 2; ++session) {
                for (int idx = 1; idx <= 2; ++idx) {
                    const auto img = render_synthetic_eye(sample_eye_params(dist, 21, 1, eye, session, idx));
                    for (SampleKind kind : {SampleKind::Real, SampleKind::Fake}) {
                        const std::string rel = std::string(1, eye_code(eye)) + "_" + std::string(kind_name(kind)) +
                                                "_" + std::to_string(session) + "_" + std::to_string(idx) + ".pgm";
                        write_pgm_file(dir_ / rel, img);
                        manifest_.entries.push_back({1, eye, session, idx, kind, rel});
                        if (kind == SampleKind::Real) templates_.emplace(rel, extract_template(img, PipelineConfig{}));
                    }
                }
            }
        }
    }
    void TearDown() override { fs::remove_all(dir_); }

    const IrisTemplate& tmpl(Eye eye, int session, int idx) const {
        return templates_.at(std::string(1, eye_code(eye)) + "_real_" + std::to_string(session) + "_" +
                             std::to_string(idx) + ".pgm");
    }

    fs::path dir_;
    DatasetManifest manifest_;
    std::map<std::string, IrisTemplate> templates_;
};

TEST_F(Protocol, CountsOnToyManifest) {
    const auto s = run_protocol(manifest_, dir_, ProtocolConfig{});
    EXPECT_EQ(s.genuine.size(), 8u);
    EXPECT_EQ(s.impostor.size(), 2u);
    EXPECT_EQ(s.attack1.size(), 8u);
    EXPECT_EQ(s.attack2.size(), 8u);
    const auto& f = s.failures;
    EXPECT_EQ(f.subjects, 2u);
    EXPECT_EQ(f.real_images, 8u);
    EXPECT_EQ(f.fake_images, 8u);
    EXPECT_EQ(f.real_segmented, 8u);
    EXPECT_EQ(f.fake_segmented, 8u);
    for (const auto* t : {&f.genuine, &f.impostor, &f.attack1, &f.attack2}) {
        EXPECT_EQ(t->implied, t->scored);
        EXPECT_EQ(t->excluded + t->failed, 0u);
    }
}

TEST_F(Protocol, ScoresMatchDirectComparisons) {
    const auto s = run_protocol(manifest_, dir_, ProtocolConfig{});
    std::multiset<std::pair<double, int>> expected;
    for (Eye eye : {Eye::Left, Eye::Right})
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) {
                const auto m = match_templates(tmpl(eye, 1, i), tmpl(eye, 2, j), 8);
                expected.insert({m.hd, m.best_shift});
            }
    for (const auto* set : {&s.genuine, &s.attack1, &s.attack2}) {
        std::multiset<std::pair<double, int>> got;
        for (const auto& c : *set) {
            got.insert({c.hd, c.shift});
            EXPECT_EQ(c.subject_a, c.subject_b);
        }
        EXPECT_EQ(got, expected);
    }
    // Each impostor score is one of the four session-1 x session-2 cross pairs.
    for (const auto& c : s.impostor) {
        EXPECT_NE(c.subject_a, c.subject_b);
        bool found = false;
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) {
                const auto m = match_templates(tmpl(c.subject_a.eye, 1, i), tmpl(c.subject_b.eye, 2, j), 8);
                found = found || (m.hd == c.hd && m.best_shift == c.shift);
            }
        EXPECT_TRUE(found) << c.hd;
    }
}

TEST_F(Protocol, SegmentationFailuresAreTallied) {
    write_pgm_file(dir_ / "L_real_2_1.pgm", GrayImage(320, 280, 128));
    const auto s = run_protocol(manifest_, dir_, ProtocolConfig{});
    const auto& f = s.failures;
    EXPECT_EQ(f.real_segmentation_failures, 1u);
    EXPECT_EQ(f.real_segmented, 7u);
    EXPECT_EQ(f.genuine.implied, 8u);
    EXPECT_EQ(f.genuine.excluded, 2u);
    EXPECT_EQ(s.genuine.size(), 6u);
    EXPECT_EQ(s.attack1.size(), 8u);
    EXPECT_EQ(s.attack2.size(), 8u);
    EXPECT_EQ(s.impostor.size(), 2u);
    for (const auto* t : {&f.genuine, &f.impostor, &f.attack1, &f.attack2}) {
        EXPECT_EQ(t->implied, t->scored + t->excluded + t->failed);
    }
}

TEST_F(Protocol, DeterministicAcrossRunsAndJobs) {
    ProtocolConfig one;
    ProtocolConfig two;
    two.jobs = 2;
    const auto a = scores_to_csv(run_protocol(manifest_, dir_, one));
    EXPECT_EQ(a, scores_to_csv(run_protocol(manifest_, dir_, one)));
    EXPECT_EQ(a, scores_to_csv(run_protocol(manifest_, dir_, two)));
}

TEST_F(Protocol, DuplicateEntryRejected) {
    auto m = manifest_;
    m.entries.push_back(m.entries.front());
    EXPECT_EQ(code_of([&] { run_protocol(m, dir_, ProtocolConfig{}); }), ErrorCode::ManifestInvalid);
    EXPECT_EQ(code_of([&] { run_protocol(DatasetManifest{}, dir_, ProtocolConfig{}); }), ErrorCode::ManifestInvalid);
}

TEST_F(Protocol, NothingSegmentsRaises) {
    for (const auto& e : manifest_.entries) write_pgm_file(dir_ / e.path, GrayImage(320, 280, 128));
    EXPECT_EQ(code_of([&] { run_protocol(manifest_, dir_, ProtocolConfig{}); }), ErrorCode::EmptyAfterSegmentation);
}
