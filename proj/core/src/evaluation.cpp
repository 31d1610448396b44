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

#include "iris/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "detail.hpp"
#include "iris/error.hpp"
#include "iris/matching.hpp"
#include "iris/pgm.hpp"

namespace iris {

namespace {

// Distance of the outermost candidate thresholds from the impostor extremes.
constexpr double kThresholdMargin = 1e-6;

std::size_t count_accepted(const std::vector<Comparison>& v, double threshold) {
    return static_cast<std::size_t>(
        std::count_if(v.begin(), v.end(), [threshold](const Comparison& c) { return c.hd <= threshold; }));
}

} // namespace

std::string subject_label(const SubjectId& s) {
    return std::to_string(s.user_id) + "-" + eye_code(s.eye);
}

std::string_view score_kind_name(ScoreKind kind) noexcept {
    switch (kind) {
    case ScoreKind::Genuine: return "genuine";
    case ScoreKind::Impostor: return "impostor";
    case ScoreKind::Attack1: return "attack1";
    case ScoreKind::Attack2: return "attack2";
    }
    return "unknown";
}

double percent(std::size_t part, std::size_t whole) noexcept {
    return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

ScoreSet ScoreSet::from_values(const std::vector<double>& genuine, const std::vector<double>& impostor,
                               const std::vector<double>& attack1, const std::vector<double>& attack2) {
    ScoreSet s;
    const auto fill = [](std::vector<Comparison>& dst, const std::vector<double>& src, ScoreKind kind) {
        for (double hd : src) {
            if (!(hd >= 0.0 && hd <= 1.0)) throw Error(ErrorCode::InvalidArgument, "hd must be in [0,1]");
            dst.push_back({kind, {}, {}, hd, 0});
        }
    };
    fill(s.genuine, genuine, ScoreKind::Genuine);
    fill(s.impostor, impostor, ScoreKind::Impostor);
    fill(s.attack1, attack1, ScoreKind::Attack1);
    fill(s.attack2, attack2, ScoreKind::Attack2);
    s.failures.genuine.implied = s.failures.genuine.scored = genuine.size();
    s.failures.impostor.implied = s.failures.impostor.scored = impostor.size();
    s.failures.attack1.implied = s.failures.attack1.scored = attack1.size();
    s.failures.attack2.implied = s.failures.attack2.scored = attack2.size();
    return s;
}

void PipelineConfig::validate() const {
    segmentation.validate();
    normalization.validate();
    encoding.validate();
    if (shift_budget < 0) throw Error(ErrorCode::InvalidArgument, "shift budget must be >= 0");
}

IrisTemplate extract_template(const GrayImage& img, const PipelineConfig& config) {
    const SegmentationResult seg = segment_eye(img, config.segmentation);
    return encode(normalize(img, seg, config.normalization), config.encoding);
}

namespace {

enum class Outcome { Ok, SegmentationFailed, EncodingFailed };

struct Extracted {
    Outcome outcome = Outcome::Ok;
    std::optional<IrisTemplate> tmpl;
};

struct SubjectImages {
    std::vector<std::size_t> real_s1, real_s2, fake_s1, fake_s2;
};

} // namespace

ScoreSet run_protocol(const DatasetManifest& manifest, const std::filesystem::path& base_dir,
                      const ProtocolConfig& config) {
    config.pipeline.validate();
    const auto& entries = manifest.entries;
    if (entries.empty()) throw Error(ErrorCode::ManifestInvalid, "manifest has no entries");

    std::set<std::tuple<int, Eye, int, int, SampleKind>> seen;
    for (const auto& e : entries) {
        if (!seen.insert({e.user_id, e.eye, e.session, e.idx, e.kind}).second) {
            throw Error(ErrorCode::ManifestInvalid, "duplicate manifest entry " + e.path);
        }
    }

    std::vector<Extracted> extracted(entries.size());
    detail::parallel_for(entries.size(), config.jobs, [&](std::size_t i) {
        const GrayImage img = read_pgm_file(base_dir / entries[i].path);
        try {
            const SegmentationResult seg = segment_eye(img, config.pipeline.segmentation);
            try {
                extracted[i].tmpl = encode(normalize(img, seg, config.pipeline.normalization),
                                           config.pipeline.encoding);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::AllMasked && e.code() != ErrorCode::DegenerateGeometry) throw;
                extracted[i].outcome = Outcome::EncodingFailed;
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SegmentationFailure) throw;
            extracted[i].outcome = Outcome::SegmentationFailed;
        }
    });

    ScoreSet scores;
    auto& f = scores.failures;
    std::map<SubjectId, SubjectImages> subjects;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        const bool real = e.kind == SampleKind::Real;
        (real ? f.real_images : f.fake_images)++;
        switch (extracted[i].outcome) {
        case Outcome::Ok: (real ? f.real_segmented : f.fake_segmented)++; break;
        case Outcome::EncodingFailed:
            (real ? f.real_segmented : f.fake_segmented)++;
            (real ? f.real_encoding_failures : f.fake_encoding_failures)++;
            break;
        case Outcome::SegmentationFailed:
            (real ? f.real_segmentation_failures : f.fake_segmentation_failures)++;
            break;
        }
        auto& s = subjects[{e.user_id, e.eye}];
        if (real) (e.session == 1 ? s.real_s1 : s.real_s2).push_back(i);
        else (e.session == 1 ? s.fake_s1 : s.fake_s2).push_back(i);
    }
    f.subjects = subjects.size();
    const auto by_idx = [&](std::size_t a, std::size_t b) { return entries[a].idx < entries[b].idx; };
    for (auto& [id, s] : subjects) {
        for (auto* v : {&s.real_s1, &s.real_s2, &s.fake_s1, &s.fake_s2}) std::sort(v->begin(), v->end(), by_idx);
    }

    const auto compare = [&](ScoreKind kind, const SubjectId& a, const SubjectId& b, std::size_t ia,
                             std::size_t ib, std::vector<Comparison>& out, PairTally& tally) {
        ++tally.implied;
        const auto& ta = extracted[ia].tmpl;
        const auto& tb = extracted[ib].tmpl;
        if (!ta || !tb) {
            ++tally.excluded;
            return;
        }
        try {
            const MatchScore m = match_templates(*ta, *tb, config.pipeline.shift_budget);
            out.push_back({kind, a, b, m.hd, m.best_shift});
            ++tally.scored;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::AllBitsMasked) throw;
            ++tally.failed;
        }
    };
    const auto all_pairs = [&](ScoreKind kind, const SubjectId& id, const std::vector<std::size_t>& enrol,
                               const std::vector<std::size_t>& probe, std::vector<Comparison>& out,
                               PairTally& tally) {
        for (auto a : enrol) {
            for (auto b : probe) compare(kind, id, id, a, b, out, tally);
        }
    };

    for (const auto& [id, s] : subjects) {
        all_pairs(ScoreKind::Genuine, id, s.real_s1, s.real_s2, scores.genuine, f.genuine);
        all_pairs(ScoreKind::Attack1, id, s.fake_s1, s.fake_s2, scores.attack1, f.attack1);
        all_pairs(ScoreKind::Attack2, id, s.real_s1, s.fake_s2, scores.attack2, f.attack2);
    }

    const auto usable = [&](const std::vector<std::size_t>& v) {
        std::vector<std::size_t> out;
        for (auto i : v) {
            if (extracted[i].tmpl) out.push_back(i);
        }
        return out;
    };
    for (const auto& [a, sa] : subjects) {
        if (sa.real_s1.empty()) continue;
        const auto enrol = usable(sa.real_s1);
        for (const auto& [b, sb] : subjects) {
            if (a == b || sb.real_s2.empty()) continue;
            const auto probe = usable(sb.real_s2);
            if (enrol.empty() || probe.empty()) {
                ++f.impostor.implied;
                ++f.impostor.excluded;
                continue;
            }
            detail::Rng rng(stable_hash({config.protocol_seed, static_cast<std::uint64_t>(a.user_id),
                                         static_cast<std::uint64_t>(a.eye == Eye::Left ? 0 : 1),
                                         static_cast<std::uint64_t>(b.user_id),
                                         static_cast<std::uint64_t>(b.eye == Eye::Left ? 0 : 1)}));
            const auto ia = enrol[rng.below(enrol.size())];
            const auto ib = probe[rng.below(probe.size())];
            compare(ScoreKind::Impostor, a, b, ia, ib, scores.impostor, f.impostor);
        }
    }

    if (scores.genuine.empty() && scores.impostor.empty() && scores.attack1.empty() &&
        scores.attack2.empty()) {
        throw Error(ErrorCode::EmptyAfterSegmentation, "no comparison survived segmentation");
    }
    return scores;
}

RateResult far_frr_at(const ScoreSet& scores, double threshold) {
    if (scores.genuine.empty() || scores.impostor.empty()) {
        throw Error(ErrorCode::EmptyScores, "FAR/FRR need genuine and impostor scores");
    }
    RateResult r;
    r.far = percent(count_accepted(scores.impostor, threshold), scores.impostor.size());
    r.frr = percent(scores.genuine.size() - count_accepted(scores.genuine, threshold), scores.genuine.size());
    return r;
}

SuccessRates success_rates(const ScoreSet& scores, double threshold) {
    if (scores.attack1.empty() || scores.attack2.empty()) {
        throw Error(ErrorCode::EmptyScores, "success rates need attack 1 and attack 2 scores");
    }
    return {percent(count_accepted(scores.attack1, threshold), scores.attack1.size()),
            percent(count_accepted(scores.attack2, threshold), scores.attack2.size())};
}

std::vector<double> candidate_thresholds(const ScoreSet& scores) {
    if (scores.impostor.empty()) throw Error(ErrorCode::EmptyScores, "no impostor scores");
    std::vector<double> v;
    v.reserve(scores.impostor.size());
    for (const auto& c : scores.impostor) v.push_back(c.hd);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<double> out;
    out.reserve(v.size() + 1);
    out.push_back(v.front() - kThresholdMargin);
    for (std::size_t i = 1; i < v.size(); ++i) out.push_back(0.5 * (v[i - 1] + v[i]));
    out.push_back(v.back() + kThresholdMargin);
    return out;
}

OperatingPoint threshold_at_far(const ScoreSet& scores, double target_far) {
    if (!(target_far >= 0.0 && target_far <= 100.0)) {
        throw Error(ErrorCode::InvalidArgument, "target FAR must be a percentage in [0,100]");
    }
    const auto candidates = candidate_thresholds(scores);
    OperatingPoint op;
    op.target_far = target_far;
    op.threshold = candidates.front();
    for (double t : candidates) {
        const double far = percent(count_accepted(scores.impostor, t), scores.impostor.size());
        if (far > target_far) break;
        op.threshold = t;
        op.far = far;
    }
    if (!scores.genuine.empty()) {
        op.frr = percent(scores.genuine.size() - count_accepted(scores.genuine, op.threshold),
                         scores.genuine.size());
    }
    if (!scores.attack1.empty()) op.sr_attack1 = percent(count_accepted(scores.attack1, op.threshold), scores.attack1.size());
    if (!scores.attack2.empty()) op.sr_attack2 = percent(count_accepted(scores.attack2, op.threshold), scores.attack2.size());
    return op;
}

ScoreStats score_stats(const std::vector<Comparison>& scores) {
    ScoreStats s;
    s.count = scores.size();
    if (scores.empty()) return s;
    s.min = s.max = scores.front().hd;
    double sum = 0.0;
    for (const auto& c : scores) {
        sum += c.hd;
        s.min = std::min(s.min, c.hd);
        s.max = std::max(s.max, c.hd);
    }
    s.mean = sum / static_cast<double>(s.count);
    double var = 0.0;
    for (const auto& c : scores) var += (c.hd - s.mean) * (c.hd - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(s.count));
    return s;
}

double equal_error_rate(const ScoreSet& scores) {
    double best = 100.0;
    for (double t : candidate_thresholds(scores)) {
        const auto r = far_frr_at(scores, t);
        best = std::min(best, std::max(r.far, r.frr));
    }
    return best;
}

EvaluationReport build_report(const ScoreSet& scores, const std::vector<double>& targets) {
    EvaluationReport rep;
    const auto& f = scores.failures;
    rep.failures = f;
    rep.subjects = f.subjects;
    rep.real_images = f.real_images;
    rep.fake_images = f.fake_images;
    rep.real_segmentation_rate = percent(f.real_segmented, f.real_images);
    rep.fake_segmentation_rate = percent(f.fake_segmented, f.fake_images);
    rep.genuine = score_stats(scores.genuine);
    rep.impostor = score_stats(scores.impostor);
    rep.attack1 = score_stats(scores.attack1);
    rep.attack2 = score_stats(scores.attack2);

    std::vector<double> sorted_targets = targets;
    std::sort(sorted_targets.begin(), sorted_targets.end());
    for (double t : sorted_targets) rep.operating_points.push_back(threshold_at_far(scores, t));

    if (!scores.impostor.empty() && !scores.genuine.empty()) {
        rep.eer = equal_error_rate(scores);
        for (double t : candidate_thresholds(scores)) {
            const auto r = far_frr_at(scores, t);
            rep.det.push_back({t, r.far, r.frr});
        }
    }
    return rep;
}

namespace {

nlohmann::json stats_json(const ScoreStats& s) {
    return {{"count", s.count}, {"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}};
}

nlohmann::json tally_json(const PairTally& t) {
    return {{"implied", t.implied}, {"excluded", t.excluded}, {"failed", t.failed}, {"scored", t.scored}};
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

} // namespace

std::string report_to_json(const EvaluationReport& r) {
    nlohmann::json j;
    j["schema"] = "irisattack.report";
    j["version"] = kReportSchemaVersion;
    j["dataset"] = {{"subjects", r.subjects}, {"real_images", r.real_images}, {"fake_images", r.fake_images}};
    const auto& f = r.failures;
    j["segmentation"] = {
        {"real_segmented", f.real_segmented},
        {"fake_segmented", f.fake_segmented},
        {"real_rate", r.real_segmentation_rate},
        {"fake_rate", r.fake_segmentation_rate},
        {"real_encoding_failures", f.real_encoding_failures},
        {"fake_encoding_failures", f.fake_encoding_failures},
    };
    j["comparisons"] = {{"genuine", tally_json(f.genuine)},
                        {"impostor", tally_json(f.impostor)},
                        {"attack1", tally_json(f.attack1)},
                        {"attack2", tally_json(f.attack2)}};
    j["scores"] = {{"genuine", stats_json(r.genuine)},
                   {"impostor", stats_json(r.impostor)},
                   {"attack1", stats_json(r.attack1)},
                   {"attack2", stats_json(r.attack2)}};
    j["eer"] = r.eer;
    j["operating_points"] = nlohmann::json::array();
    for (const auto& op : r.operating_points) {
        j["operating_points"].push_back({{"target_far", op.target_far},
                                         {"threshold", op.threshold},
                                         {"far", op.far},
                                         {"frr", op.frr},
                                         {"sr_attack1", op.sr_attack1},
                                         {"sr_attack2", op.sr_attack2}});
    }
    j["det"] = nlohmann::json::array();
    for (const auto& d : r.det) j["det"].push_back({d.threshold, d.far, d.frr});
    return j.dump(2) + "\n";
}

std::string report_to_table(const EvaluationReport& r) {
    std::ostringstream out;
    out << "images: " << r.real_images << " real, " << r.fake_images << " fake, " << r.subjects
        << " subjects\n";
    out << "segmented: real " << r.failures.real_segmented << "/" << r.real_images << " ("
        << fixed(r.real_segmentation_rate, 2) << "%), fake " << r.failures.fake_segmented << "/"
        << r.fake_images << " (" << fixed(r.fake_segmentation_rate, 2) << "%)\n";
    out << "EER (NOM): " << fixed(r.eer, 2) << "%\n\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-18s | %-10s | %-10s | %s\n", "NOM", "Attack 1", "Attack 2", "threshold");
    out << line;
    std::snprintf(line, sizeof line, "%-18s | %-10s | %-10s | %s\n", "FAR - FRR (%)", "SR (%)", "SR (%)", "hd");
    out << line;
    out << std::string(60, '-') << "\n";
    for (const auto& op : r.operating_points) {
        const std::string nom = fixed(op.target_far, 2) + " - " + fixed(op.frr, 2);
        std::snprintf(line, sizeof line, "%-18s | %-10s | %-10s | %s\n", nom.c_str(),
                      fixed(op.sr_attack1, 2).c_str(), fixed(op.sr_attack2, 2).c_str(),
                      fixed(op.threshold, 6).c_str());
        out << line;
    }
    return out.str();
}

std::string scores_to_csv(const ScoreSet& scores) {
    std::ostringstream out;
    out << "kind,subject_a,subject_b,hd,shift\n";
    for (const auto* set : {&scores.genuine, &scores.impostor, &scores.attack1, &scores.attack2}) {
        std::vector<Comparison> sorted = *set;
        std::sort(sorted.begin(), sorted.end(), [](const Comparison& x, const Comparison& y) {
            return std::tie(x.subject_a, x.subject_b, x.hd, x.shift) <
                   std::tie(y.subject_a, y.subject_b, y.hd, y.shift);
        });
        for (const auto& c : sorted) {
            out << score_kind_name(c.kind) << ',' << subject_label(c.subject_a) << ','
                << subject_label(c.subject_b) << ',' << fixed(c.hd, 6) << ',' << c.shift << '\n';
        }
    }
    return out.str();
}

} // namespace iris
