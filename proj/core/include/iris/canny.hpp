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

#include "iris/image.hpp"

namespace iris {

/// Thresholds are fractions of the maximum gradient magnitude in the image.
struct CannyParams {
    double sigma = 2.0;
    double low = 0.2;
    double high = 0.5;

    void validate() const;
};

/// Gaussian prefilter, Sobel gradient, non-maximum suppression and
/// hysteresis. Output pixels are 0 or 255.
GrayImage canny_edges(const GrayImage& img, const CannyParams& params = {});

} // namespace iris
