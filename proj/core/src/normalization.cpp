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

#include "iris/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iris/error.hpp"

namespace iris {

NormalizedPattern::NormalizedPattern(int radial_res, int angular_res)
    : radial_res_(radial_res), angular_res_(angular_res) {
    if (radial_res < 1 || angular_res < 1) {
        throw Error(ErrorCode::InvalidArgument, "pattern dimensions must be positive");
    }
    const auto n = static_cast<std::size_t>(radial_res) * static_cast<std::size_t>(angular_res);
    samples_.assign(n, 0.0);
    mask_.assign(n, 0);
}

std::size_t NormalizedPattern::masked_count() const noexcept {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

GrayImage NormalizedPattern::to_image() const {
    GrayImage out(angular_res_, radial_res_);
    for (int r = 0; r < radial_res_; ++r) {
        for (int c = 0; c < angular_res_; ++c) {
            out.at(c, r) = masked(r, c) ? 0 : saturate_u8(sample(r, c));
        }
    }
    return out;
}

GrayImage NormalizedPattern::mask_image() const {
    GrayImage out(angular_res_, radial_res_);
    for (int r = 0; r < radial_res_; ++r) {
        for (int c = 0; c < angular_res_; ++c) out.at(c, r) = masked(r, c) ? 255 : 0;
    }
    return out;
}

void NormalizationConfig::validate() const {
    if (radial_res < 2) throw Error(ErrorCode::InvalidArgument, "radial resolution must be >= 2");
    if (angular_res < 8) throw Error(ErrorCode::InvalidArgument, "angular resolution must be >= 8");
    if (eyelash_threshold && (*eyelash_threshold < 0 || *eyelash_threshold > 255)) {
        throw Error(ErrorCode::InvalidArgument, "eyelash threshold must be in [0,255]");
    }
}

double iris_boundary_distance(const Circle& pupil, const Circle& iris, double theta) {
    const double ox = iris.cx - pupil.cx;
    const double oy = iris.cy - pupil.cy;
    const double proj = ox * std::cos(theta) + oy * std::sin(theta);
    const double disc = proj * proj - (ox * ox + oy * oy) + iris.r * iris.r;
    if (disc < 0.0) {
        throw Error(ErrorCode::DegenerateGeometry, "ray from the pupil center misses the iris circle");
    }
    const double d = proj + std::sqrt(disc);
    if (d <= 0.0) {
        throw Error(ErrorCode::DegenerateGeometry, "iris boundary lies behind the pupil center");
    }
    return d;
}

namespace {

double bilinear(const GrayImage& img, double x, double y) {
    const int x0 = std::min(static_cast<int>(std::floor(x)), img.width() - 1);
    const int y0 = std::min(static_cast<int>(std::floor(y)), img.height() - 1);
    const int x1 = std::min(x0 + 1, img.width() - 1);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = img.at(x0, y0) * (1.0 - fx) + img.at(x1, y0) * fx;
    const double bottom = img.at(x0, y1) * (1.0 - fx) + img.at(x1, y1) * fx;
    return top * (1.0 - fy) + bottom * fy;
}

} // namespace

NormalizedPattern normalize(const GrayImage& img, const SegmentationResult& seg,
                            const NormalizationConfig& config) {
    config.validate();
    const int rows = config.radial_res;
    const int cols = config.angular_res;
    NormalizedPattern out(rows, cols);

    const double max_x = img.width() - 1;
    const double max_y = img.height() - 1;
    for (int j = 0; j < cols; ++j) {
        const double theta = 2.0 * M_PI * j / cols;
        const double ux = std::cos(theta);
        const double uy = std::sin(theta);
        const double start = seg.pupil.r + 0.5;
        const double end = iris_boundary_distance(seg.pupil, seg.iris, theta) - 0.5;
        if (end <= start) {
            throw Error(ErrorCode::DegenerateGeometry,
                        "iris boundary inside the pupil at column " + std::to_string(j));
        }
        for (int i = 0; i < rows; ++i) {
            const double rho = start + (end - start) * i / (rows - 1);
            const double x = seg.pupil.cx + rho * ux;
            const double y = seg.pupil.cy + rho * uy;
            if (x < 0.0 || y < 0.0 || x > max_x || y > max_y) {
                out.set_masked(i, j, true);
                continue;
            }
            const double v = bilinear(img, x, y);
            out.sample(i, j) = v;
            bool masked = false;
            if (seg.upper_eyelid && seg.upper_eyelid->occludes(x, y)) masked = true;
            if (seg.lower_eyelid && seg.lower_eyelid->occludes(x, y)) masked = true;
            if (config.eyelash_threshold && v < *config.eyelash_threshold) masked = true;
            out.set_masked(i, j, masked);
        }
    }
    return out;
}

} // namespace iris
