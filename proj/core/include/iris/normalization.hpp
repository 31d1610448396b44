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
#include <optional>
#include <vector>

#include "iris/image.hpp"
#include "iris/segmentation.hpp"

namespace iris {

/// Angular-radial unwrapping of the iris annulus. Row index is radial
/// (0 at the pupil boundary), column index is angular.
class NormalizedPattern {
public:
    NormalizedPattern(int radial_res, int angular_res);

    int radial_res() const noexcept { return radial_res_; }
    int angular_res() const noexcept { return angular_res_; }

    double sample(int row, int col) const noexcept { return samples_[index(row, col)]; }
    double& sample(int row, int col) noexcept { return samples_[index(row, col)]; }
    bool masked(int row, int col) const noexcept { return mask_[index(row, col)] != 0; }
    void set_masked(int row, int col, bool m) noexcept { mask_[index(row, col)] = m ? 1 : 0; }

    std::size_t masked_count() const noexcept;

    /// Samples rounded to 8 bits; masked samples rendered as 0.
    GrayImage to_image() const;
    /// 255 where masked.
    GrayImage mask_image() const;

private:
    std::size_t index(int row, int col) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(angular_res_) +
               static_cast<std::size_t>(col);
    }

    int radial_res_;
    int angular_res_;
    std::vector<double> samples_;
    std::vector<std::uint8_t> mask_;
};

struct NormalizationConfig {
    int radial_res = 20;
    int angular_res = 240;
    /// Eyelash removal by luminance threshold: samples darker than this are
    /// masked. Disabled unless set.
    std::optional<int> eyelash_threshold;

    void validate() const;
};

/// Distance from the pupil center to the iris boundary along direction
/// theta. Throws DegenerateGeometry when the ray misses the iris circle.
double iris_boundary_distance(const Circle& pupil, const Circle& iris, double theta);

/// Rubber-sheet unwrapping referenced to the pupil center. Column j samples
/// the ray at theta = 2*pi*j/A with direction (cos theta, sin theta) in image
/// coordinates; rows run from pupil.r + 0.5 to the iris boundary - 0.5.
NormalizedPattern normalize(const GrayImage& img, const SegmentationResult& seg,
                            const NormalizationConfig& config = {});

} // namespace iris
