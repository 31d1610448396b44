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

#include <optional>
#include <vector>

#include "iris/canny.hpp"
#include "iris/filters.hpp"
#include "iris/image.hpp"

namespace iris {

struct Circle {
    double cx = 0.0;
    double cy = 0.0;
    double r = 0.0;

    bool contains_strictly(double x, double y) const noexcept;

    friend bool operator==(const Circle&, const Circle&) = default;
};

/// Line a*x + b*y = c with a^2 + b^2 = 1. The occluded half-plane is
/// a*x + b*y < c for Side::Above and > c for Side::Below; coefficients are
/// oriented so that b >= 0, which makes "above" mean smaller image y.
struct EyelidLine {
    enum class Side { Above, Below };

    double a = 0.0;
    double b = 1.0;
    double c = 0.0;
    Side side = Side::Above;

    bool occludes(double x, double y) const noexcept;
};

struct SegmentationResult {
    Circle pupil;
    Circle iris;
    std::optional<EyelidLine> upper_eyelid;
    std::optional<EyelidLine> lower_eyelid;
};

struct Rect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

struct CircleDetection {
    Circle circle;
    double peak_score = 0.0;
    int votes = 0;
};

struct HoughCircleOptions {
    double min_peak = 0.35;
    /// Restricts candidate centers to lie strictly inside this circle.
    std::optional<Circle> center_within;
};

/// Rasterized ring of radius r: integer offsets with |hypot(dx,dy) - r| < 0.5.
/// Its size is the vote ceiling used to normalize peak scores.
std::vector<Offset> circle_offsets(int r);

/// Exhaustive (cx, cy, r) accumulator at 1 px resolution. Maximizes raw
/// votes; ties go to smallest r, then cy, then cx.
CircleDetection hough_circle(const GrayImage& edges, int r_min, int r_max,
                             const HoughCircleOptions& options = {});

struct LineDetection {
    EyelidLine line;
    double peak_score = 0.0; ///< votes / region width
    int votes = 0;
    int theta_deg = 0;
    int rho = 0;
};

struct HoughLineOptions {
    /// Defaults to half the region width when unset.
    std::optional<int> min_votes;
    int theta_min_deg = 0;
    int theta_max_deg = 179;
};

/// (rho, theta) accumulator over edge pixels inside `region`, 1 degree by
/// 1 px bins with rho = x cos(theta) + y sin(theta) in image coordinates.
/// Ties go to smallest theta, then smallest rho.
LineDetection hough_line(const GrayImage& edges, const Rect& region,
                         const HoughLineOptions& options = {});

struct SegmentationConfig {
    int pupil_r_min = 20;
    int pupil_r_max = 70;
    int iris_r_min = 60;
    int iris_r_max = 150;
    /// Pupil radius is additionally capped at this fraction of the iris radius.
    double max_pupil_iris_ratio = 0.75;
    double min_peak = 0.35;
    CannyParams canny;
    bool detect_eyelids = true;
    double min_line_votes_fraction = 0.5;
    /// Hysteresis high threshold of the edge map used for the eyelid search.
    double eyelid_canny_high = 0.3;

    void validate() const;
};

/// Canny, iris circle, pupil circle inside the iris, then optional eyelid
/// lines above and below the pupil. Throws SegmentationFailure when a circle
/// is missing or the geometry is not nested.
SegmentationResult segment_eye(const GrayImage& img, const SegmentationConfig& config = {});

/// Same as segment_eye but from one precomputed edge map, used for the
/// circles and the eyelids alike.
SegmentationResult segment_edges(const GrayImage& edges, const SegmentationConfig& config = {});

/// Copy of `img` with circle and eyelid pixels set to 255.
GrayImage draw_overlay(const GrayImage& img, const SegmentationResult& seg);

} // namespace iris
