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

#include "iris/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "iris/error.hpp"

namespace iris {

bool Circle::contains_strictly(double x, double y) const noexcept {
    const double dx = x - cx;
    const double dy = y - cy;
    return dx * dx + dy * dy < r * r;
}

bool EyelidLine::occludes(double x, double y) const noexcept {
    const double v = a * x + b * y;
    return side == Side::Above ? v < c : v > c;
}

std::vector<Offset> circle_offsets(int r) {
    std::vector<Offset> out;
    for (int dy = -r - 1; dy <= r + 1; ++dy) {
        for (int dx = -r - 1; dx <= r + 1; ++dx) {
            const double d = std::sqrt(static_cast<double>(dx * dx + dy * dy));
            if (std::abs(d - r) < 0.5) out.push_back({dx, dy});
        }
    }
    return out;
}

namespace {

struct EdgePoint {
    int x;
    int y;
};

std::vector<EdgePoint> collect_edges(const GrayImage& edges, const Rect& region) {
    std::vector<EdgePoint> pts;
    for (int y = region.y; y < region.y + region.height; ++y) {
        for (int x = region.x; x < region.x + region.width; ++x) {
            const auto v = edges.at(x, y);
            if (v == 255) {
                pts.push_back({x, y});
            } else if (v != 0) {
                throw Error(ErrorCode::InvalidArgument, "edge map must contain only 0 and 255");
            }
        }
    }
    return pts;
}

double snap(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

Rect clip(const Rect& r, int w, int h) {
    const int x0 = std::max(r.x, 0);
    const int y0 = std::max(r.y, 0);
    const int x1 = std::min(r.x + r.width, w);
    const int y1 = std::min(r.y + r.height, h);
    return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

} // namespace

CircleDetection hough_circle(const GrayImage& edges, int r_min, int r_max,
                             const HoughCircleOptions& options) {
    if (r_min < 3 || r_max <= r_min) {
        throw Error(ErrorCode::InvalidArgument,
                    "hough_circle needs 3 <= r_min < r_max, got [" + std::to_string(r_min) + ", " +
                        std::to_string(r_max) + "]");
    }
    const int w = edges.width();
    const int h = edges.height();
    const auto pts = collect_edges(edges, {0, 0, w, h});
    if (pts.empty()) throw Error(ErrorCode::NoCircleFound, "edge map is empty");

    // Center search window, optionally limited to the inside of a circle.
    int x_lo = 0, x_hi = w - 1, y_lo = 0, y_hi = h - 1;
    if (options.center_within) {
        const auto& c = *options.center_within;
        x_lo = std::max(x_lo, static_cast<int>(std::floor(c.cx - c.r)));
        x_hi = std::min(x_hi, static_cast<int>(std::ceil(c.cx + c.r)));
        y_lo = std::max(y_lo, static_cast<int>(std::floor(c.cy - c.r)));
        y_hi = std::min(y_hi, static_cast<int>(std::ceil(c.cy + c.r)));
    }

    // Padded accumulator so every vote lands in range without a bounds test.
    const int pad = r_max + 1;
    const int pw = w + 2 * pad;
    const int ph = h + 2 * pad;
    std::vector<std::uint16_t> acc(static_cast<std::size_t>(pw) * static_cast<std::size_t>(ph));
    std::vector<std::ptrdiff_t> edge_index(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        edge_index[i] = static_cast<std::ptrdiff_t>(pts[i].y + pad) * pw + (pts[i].x + pad);
    }

    CircleDetection best;
    best.votes = 0;
    double best_capacity = 1.0;
    for (int r = r_min; r <= r_max; ++r) {
        const auto ring = circle_offsets(r);
        std::vector<std::ptrdiff_t> deltas;
        deltas.reserve(ring.size());
        for (const auto& o : ring) deltas.push_back(-static_cast<std::ptrdiff_t>(o.dy) * pw - o.dx);

        std::fill(acc.begin(), acc.end(), 0);
        std::uint16_t* base = acc.data();
        for (const auto e : edge_index) {
            std::uint16_t* p = base + e;
            for (const auto d : deltas) ++p[d];
        }
        for (int cy = y_lo; cy <= y_hi; ++cy) {
            const std::uint16_t* row = base + static_cast<std::ptrdiff_t>(cy + pad) * pw + pad;
            for (int cx = x_lo; cx <= x_hi; ++cx) {
                const int v = row[cx];
                if (v <= best.votes) continue;
                if (options.center_within && !options.center_within->contains_strictly(cx, cy)) {
                    continue;
                }
                best.votes = v;
                best.circle = {static_cast<double>(cx), static_cast<double>(cy), static_cast<double>(r)};
                best_capacity = static_cast<double>(ring.size());
            }
        }
    }
    if (best.votes == 0) throw Error(ErrorCode::NoCircleFound, "no circle candidate received votes");
    best.peak_score = std::min(1.0, best.votes / best_capacity);
    if (best.peak_score < options.min_peak) {
        throw Error(ErrorCode::NoCircleFound,
                    "circle peak score " + std::to_string(best.peak_score) + " below threshold");
    }
    return best;
}

LineDetection hough_line(const GrayImage& edges, const Rect& region,
                         const HoughLineOptions& options) {
    if (region.x < 0 || region.y < 0 || region.width < 1 || region.height < 1 ||
        region.x + region.width > edges.width() || region.y + region.height > edges.height()) {
        throw Error(ErrorCode::InvalidArgument, "hough_line region outside the image");
    }
    if (options.theta_min_deg < 0 || options.theta_max_deg > 179 ||
        options.theta_min_deg > options.theta_max_deg) {
        throw Error(ErrorCode::InvalidArgument, "hough_line theta range must lie in [0, 179]");
    }
    const int min_votes = options.min_votes.value_or((region.width + 1) / 2);
    const auto pts = collect_edges(edges, region);

    const int rho_max = edges.width() + edges.height();
    const int n_rho = 2 * rho_max + 1;
    const int n_theta = options.theta_max_deg - options.theta_min_deg + 1;
    std::vector<int> acc(static_cast<std::size_t>(n_theta) * n_rho, 0);
    std::vector<double> cos_t(n_theta), sin_t(n_theta);
    for (int t = 0; t < n_theta; ++t) {
        const double rad = (options.theta_min_deg + t) * M_PI / 180.0;
        cos_t[t] = snap(std::cos(rad));
        sin_t[t] = snap(std::sin(rad));
    }
    for (const auto& p : pts) {
        for (int t = 0; t < n_theta; ++t) {
            const long rho = std::lround(p.x * cos_t[t] + p.y * sin_t[t]);
            ++acc[static_cast<std::size_t>(t) * n_rho + static_cast<std::size_t>(rho + rho_max)];
        }
    }

    LineDetection best;
    for (int t = 0; t < n_theta; ++t) {
        for (int k = 0; k < n_rho; ++k) {
            const int v = acc[static_cast<std::size_t>(t) * n_rho + k];
            if (v > best.votes) {
                best.votes = v;
                best.theta_deg = options.theta_min_deg + t;
                best.rho = k - rho_max;
                best.line = {cos_t[t], sin_t[t], static_cast<double>(k - rho_max), EyelidLine::Side::Above};
            }
        }
    }
    if (best.votes == 0 || best.votes < min_votes) {
        throw Error(ErrorCode::NoLineFound,
                    "line peak " + std::to_string(best.votes) + " below " + std::to_string(min_votes));
    }
    best.peak_score = static_cast<double>(best.votes) / region.width;
    return best;
}

void SegmentationConfig::validate() const {
    if (pupil_r_min < 3 || pupil_r_max <= pupil_r_min) {
        throw Error(ErrorCode::InvalidArgument, "pupil radius range must satisfy 3 <= min < max");
    }
    if (iris_r_min < 3 || iris_r_max <= iris_r_min) {
        throw Error(ErrorCode::InvalidArgument, "iris radius range must satisfy 3 <= min < max");
    }
    if (!(max_pupil_iris_ratio > 0.0 && max_pupil_iris_ratio < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "max_pupil_iris_ratio must be in (0,1)");
    }
    if (!(min_peak >= 0.0 && min_peak <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "min_peak must be in [0,1]");
    }
    if (!(min_line_votes_fraction > 0.0 && min_line_votes_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "min_line_votes_fraction must be in (0,1]");
    }
    canny.validate();
    if (!(eyelid_canny_high > canny.low && eyelid_canny_high <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "eyelid_canny_high must be in (canny.low, 1]");
    }
}

namespace {

std::optional<EyelidLine> find_eyelid(const GrayImage& edges, const Rect& wanted,
                                      const SegmentationConfig& config, EyelidLine::Side side) {
    const Rect region = clip(wanted, edges.width(), edges.height());
    if (region.width < 8 || region.height < 3) return std::nullopt;
    HoughLineOptions opts;
    opts.min_votes = static_cast<int>(std::ceil(config.min_line_votes_fraction * region.width));
    opts.theta_min_deg = 45;
    opts.theta_max_deg = 135;
    try {
        auto det = hough_line(edges, region, opts);
        det.line.side = side;
        return det.line;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoLineFound) return std::nullopt;
        throw;
    }
}

[[noreturn]] void fail(const std::string& why) {
    throw Error(ErrorCode::SegmentationFailure, "segmentation failure: " + why);
}

} // namespace

namespace {

SegmentationResult segment_maps(const GrayImage& edges, const GrayImage& lid_edges,
                                const SegmentationConfig& config) {
    SegmentationResult seg;
    try {
        seg.iris = hough_circle(edges, config.iris_r_min, config.iris_r_max,
                                {config.min_peak, std::nullopt})
                       .circle;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoCircleFound) throw;
        fail("iris boundary not found");
    }

    const int pupil_cap = static_cast<int>(std::floor(config.max_pupil_iris_ratio * seg.iris.r));
    const int pupil_max = std::min(config.pupil_r_max, pupil_cap);
    if (pupil_max <= config.pupil_r_min) fail("iris too small for the pupil radius range");
    try {
        seg.pupil = hough_circle(edges, config.pupil_r_min, pupil_max, {config.min_peak, seg.iris}).circle;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoCircleFound) throw;
        fail("pupil boundary not found");
    }

    const double center_gap = std::hypot(seg.pupil.cx - seg.iris.cx, seg.pupil.cy - seg.iris.cy);
    if (!seg.iris.contains_strictly(seg.pupil.cx, seg.pupil.cy) || seg.pupil.r >= seg.iris.r ||
        center_gap + seg.pupil.r >= seg.iris.r) {
        fail("pupil not nested inside iris");
    }

    if (config.detect_eyelids) {
        const int left = static_cast<int>(seg.iris.cx - seg.iris.r);
        const int width = static_cast<int>(2 * seg.iris.r) + 1;
        const int iris_top = static_cast<int>(seg.iris.cy - seg.iris.r);
        const int pupil_top = static_cast<int>(seg.pupil.cy - seg.pupil.r);
        const int pupil_bottom = static_cast<int>(seg.pupil.cy + seg.pupil.r);
        const int iris_bottom = static_cast<int>(seg.iris.cy + seg.iris.r);
        seg.upper_eyelid = find_eyelid(lid_edges, {left, iris_top, width, pupil_top - iris_top}, config,
                                       EyelidLine::Side::Above);
        seg.lower_eyelid = find_eyelid(lid_edges, {left, pupil_bottom + 1, width, iris_bottom - pupil_bottom},
                                       config, EyelidLine::Side::Below);
    }
    return seg;
}

} // namespace

SegmentationResult segment_edges(const GrayImage& edges, const SegmentationConfig& config) {
    config.validate();
    return segment_maps(edges, edges, config);
}

SegmentationResult segment_eye(const GrayImage& img, const SegmentationConfig& config) {
    config.validate();
    const GrayImage edges = canny_edges(img, config.canny);
    if (!config.detect_eyelids) return segment_maps(edges, edges, config);
    // Lid boundaries are much weaker than the limbus; a lower hysteresis
    // ceiling keeps them connected.
    CannyParams lid = config.canny;
    lid.high = config.eyelid_canny_high;
    return segment_maps(edges, canny_edges(img, lid), config);
}

GrayImage draw_overlay(const GrayImage& img, const SegmentationResult& seg) {
    GrayImage out = img;
    const auto draw_circle = [&](const Circle& c) {
        const int cx = static_cast<int>(std::lround(c.cx));
        const int cy = static_cast<int>(std::lround(c.cy));
        for (const auto& o : circle_offsets(static_cast<int>(std::lround(c.r)))) {
            if (out.contains(cx + o.dx, cy + o.dy)) out.at(cx + o.dx, cy + o.dy) = 255;
        }
    };
    draw_circle(seg.pupil);
    draw_circle(seg.iris);
    for (const auto& lid : {seg.upper_eyelid, seg.lower_eyelid}) {
        if (!lid) continue;
        for (int y = 0; y < out.height(); ++y) {
            for (int x = 0; x < out.width(); ++x) {
                if (std::abs(lid->a * x + lid->b * y - lid->c) < 0.5) out.at(x, y) = 255;
            }
        }
    }
    return out;
}

} // namespace iris
