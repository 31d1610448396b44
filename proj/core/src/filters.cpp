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

#include "iris/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "iris/error.hpp"

namespace iris {

StructuringElement::StructuringElement(Shape shape, int radius) : shape_(shape), radius_(radius) {
    if (radius < 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "structuring element radius must be >= 1, got " + std::to_string(radius));
    }
}

std::vector<Offset> StructuringElement::footprint() const {
    std::vector<Offset> out;
    for (int dy = -radius_; dy <= radius_; ++dy) {
        for (int dx = -radius_; dx <= radius_; ++dx) {
            if (shape_ == Shape::Square || dx * dx + dy * dy <= radius_ * radius_) {
                out.push_back({dx, dy});
            }
        }
    }
    return out;
}

GrayImage histogram_equalize(const GrayImage& img) {
    std::array<std::size_t, 256> hist{};
    for (auto v : img.pixels()) ++hist[v];

    std::array<std::size_t, 256> cdf{};
    std::size_t running = 0;
    std::size_t cdf_min = 0;
    for (std::size_t v = 0; v < 256; ++v) {
        running += hist[v];
        cdf[v] = running;
        if (cdf_min == 0 && running > 0) cdf_min = running;
    }
    const std::size_t total = img.size();
    if (total == cdf_min) return img; // single gray level

    std::array<std::uint8_t, 256> lut{};
    const double denom = static_cast<double>(total - cdf_min);
    for (std::size_t v = 0; v < 256; ++v) {
        if (cdf[v] < cdf_min) {
            lut[v] = 0;
            continue;
        }
        lut[v] = static_cast<std::uint8_t>(
            std::lround(255.0 * static_cast<double>(cdf[v] - cdf_min) / denom));
    }
    GrayImage out = img;
    for (auto& p : out.pixels()) p = lut[p];
    return out;
}

GrayImage median_filter(const GrayImage& img, int radius) {
    if (radius < 1) {
        throw Error(ErrorCode::InvalidArgument, "median radius must be >= 1");
    }
    GrayImage out(img.width(), img.height());
    const int side = 2 * radius + 1;
    std::vector<std::uint8_t> window(static_cast<std::size_t>(side * side));
    const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            std::size_t k = 0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    window[k++] = img.clamped(x + dx, y + dy);
                }
            }
            std::nth_element(window.begin(), mid, window.end());
            out.at(x, y) = *mid;
        }
    }
    return out;
}

namespace {

template <typename Pick>
GrayImage square_pass(const GrayImage& img, int radius, Pick pick) {
    const int w = img.width();
    const int h = img.height();
    GrayImage rows(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t best = img.clamped(x - radius, y);
            for (int dx = -radius + 1; dx <= radius; ++dx) best = pick(best, img.clamped(x + dx, y));
            rows.at(x, y) = best;
        }
    }
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t best = rows.clamped(x, y - radius);
            for (int dy = -radius + 1; dy <= radius; ++dy) best = pick(best, rows.clamped(x, y + dy));
            out.at(x, y) = best;
        }
    }
    return out;
}

template <typename Pick>
GrayImage footprint_pass(const GrayImage& img, const StructuringElement& se, Pick pick) {
    if (se.shape() == StructuringElement::Shape::Square) {
        return square_pass(img, se.radius(), pick);
    }
    const auto fp = se.footprint();
    const int r = se.radius();
    const int w = img.width();
    const int h = img.height();
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        const bool inner_y = y >= r && y < h - r;
        for (int x = 0; x < w; ++x) {
            std::uint8_t best = img.at(x, y);
            if (inner_y && x >= r && x < w - r) {
                for (const auto& o : fp) best = pick(best, img.at(x + o.dx, y + o.dy));
            } else {
                for (const auto& o : fp) best = pick(best, img.clamped(x + o.dx, y + o.dy));
            }
            out.at(x, y) = best;
        }
    }
    return out;
}

GrayImage erode_impl(const GrayImage& img, const StructuringElement& se) {
    return footprint_pass(img, se, [](std::uint8_t a, std::uint8_t b) { return std::min(a, b); });
}

GrayImage dilate_impl(const GrayImage& img, const StructuringElement& se) {
    return footprint_pass(img, se, [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); });
}

} // namespace

GrayImage morph(const GrayImage& img, const StructuringElement& se, MorphOp op) {
    switch (op) {
    case MorphOp::Erode: return erode_impl(img, se);
    case MorphOp::Dilate: return dilate_impl(img, se);
    case MorphOp::Open: return dilate_impl(erode_impl(img, se), se);
    case MorphOp::Close: return erode_impl(dilate_impl(img, se), se);
    }
    return img;
}

GrayImage top_hat(const GrayImage& img, const StructuringElement& se) {
    const GrayImage opened = open(img, se);
    GrayImage out(img.width(), img.height());
    const auto src = img.pixels();
    const auto op = opened.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = saturate_u8(int{src[i]} - int{op[i]});
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "gaussian sigma must be > 0");
    }
    const int half = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * half + 1));
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + half)] = v;
        sum += v;
    }
    for (auto& v : k) v /= sum;
    return k;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
    const auto k = gaussian_kernel(sigma);
    const int half = static_cast<int>(k.size() / 2);
    const int w = img.width();
    const int h = img.height();

    std::vector<double> tmp(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i) {
                acc += k[static_cast<std::size_t>(i + half)] * img.clamped(x + i, y);
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i) {
                const int yy = std::clamp(y + i, 0, h - 1);
                acc += k[static_cast<std::size_t>(i + half)] * tmp[static_cast<std::size_t>(yy) * w + x];
            }
            out.at(x, y) = saturate_u8(acc);
        }
    }
    return out;
}

} // namespace iris
