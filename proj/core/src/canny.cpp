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

#include "iris/canny.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "iris/error.hpp"
#include "iris/filters.hpp"

namespace iris {

void CannyParams::validate() const {
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "canny sigma must be > 0");
    if (!(low > 0.0 && low < high && high <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "canny thresholds need 0 < low < high <= 1");
    }
}

GrayImage canny_edges(const GrayImage& img, const CannyParams& params) {
    params.validate();
    const GrayImage smooth = gaussian_blur(img, params.sigma);
    const int w = img.width();
    const int h = img.height();
    const auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

    std::vector<float> mag(static_cast<std::size_t>(w) * h, 0.0f);
    std::vector<std::uint8_t> dir(mag.size(), 0);
    float max_mag = 0.0f;
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const auto p = [&](int dx, int dy) { return static_cast<int>(smooth.at(x + dx, y + dy)); };
            const int gx = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
            const int gy = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
            const float m = std::hypot(static_cast<float>(gx), static_cast<float>(gy));
            mag[idx(x, y)] = m;
            max_mag = std::max(max_mag, m);
            // quantize the gradient direction to 0, 45, 90, 135 degrees
            double angle = std::atan2(static_cast<double>(gy), static_cast<double>(gx)) * 180.0 / M_PI;
            if (angle < 0) angle += 180.0;
            std::uint8_t d = 0;
            if (angle >= 22.5 && angle < 67.5) d = 1;
            else if (angle >= 67.5 && angle < 112.5) d = 2;
            else if (angle >= 112.5 && angle < 157.5) d = 3;
            dir[idx(x, y)] = d;
        }
    }

    GrayImage out(w, h, 0);
    if (max_mag <= 0.0f) return out;

    static constexpr int kStep[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
    std::vector<float> thin(mag.size(), 0.0f);
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const float m = mag[idx(x, y)];
            if (m <= 0.0f) continue;
            const auto* s = kStep[dir[idx(x, y)]];
            const float fwd = mag[idx(x + s[0], y + s[1])];
            const float back = mag[idx(x - s[0], y - s[1])];
            // strict on one side so that plateaus keep a single pixel
            if (m > back && m >= fwd) thin[idx(x, y)] = m;
        }
    }

    const float high = static_cast<float>(params.high) * max_mag;
    const float low = static_cast<float>(params.low) * max_mag;
    std::vector<std::size_t> stack;
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            if (thin[idx(x, y)] >= high && out.at(x, y) == 0) {
                out.at(x, y) = 255;
                stack.push_back(idx(x, y));
                while (!stack.empty()) {
                    const std::size_t i = stack.back();
                    stack.pop_back();
                    const int cx = static_cast<int>(i % w);
                    const int cy = static_cast<int>(i / w);
                    for (int dy = -1; dy <= 1; ++dy) {
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int nx = cx + dx;
                            const int ny = cy + dy;
                            if (nx < 1 || ny < 1 || nx >= w - 1 || ny >= h - 1) continue;
                            if (out.at(nx, ny) == 0 && thin[idx(nx, ny)] >= low) {
                                out.at(nx, ny) = 255;
                                stack.push_back(idx(nx, ny));
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

} // namespace iris
