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

#include <vector>

#include "iris/image.hpp"

namespace iris {

struct Offset {
    int dx;
    int dy;
};

class StructuringElement {
public:
    enum class Shape { Disk, Square };

    StructuringElement(Shape shape, int radius);

    static StructuringElement disk(int radius) { return {Shape::Disk, radius}; }
    static StructuringElement square(int radius) { return {Shape::Square, radius}; }

    Shape shape() const noexcept { return shape_; }
    int radius() const noexcept { return radius_; }

    /// Footprint relative to the center; a disk holds dx^2 + dy^2 <= r^2.
    std::vector<Offset> footprint() const;

    friend bool operator==(const StructuringElement&, const StructuringElement&) = default;

private:
    Shape shape_;
    int radius_;
};

enum class MorphOp { Erode, Dilate, Open, Close };

GrayImage histogram_equalize(const GrayImage& img);
GrayImage median_filter(const GrayImage& img, int radius);
GrayImage morph(const GrayImage& img, const StructuringElement& se, MorphOp op);

inline GrayImage erode(const GrayImage& img, const StructuringElement& se) {
    return morph(img, se, MorphOp::Erode);
}
inline GrayImage dilate(const GrayImage& img, const StructuringElement& se) {
    return morph(img, se, MorphOp::Dilate);
}
inline GrayImage open(const GrayImage& img, const StructuringElement& se) {
    return morph(img, se, MorphOp::Open);
}
inline GrayImage close(const GrayImage& img, const StructuringElement& se) {
    return morph(img, se, MorphOp::Close);
}

/// White top-hat: img - open(img, se), never negative.
GrayImage top_hat(const GrayImage& img, const StructuringElement& se);

/// Separable Gaussian, kernel truncated at +-ceil(3 sigma), clamp-to-border.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

/// Normalized 1-D Gaussian taps, length 2*ceil(3 sigma)+1.
std::vector<double> gaussian_kernel(double sigma);

} // namespace iris
