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

#include "iris/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iris/error.hpp"

namespace iris {

void LogGaborParams::validate() const {
    if (!(wavelength >= 3.0)) throw Error(ErrorCode::InvalidArgument, "log-Gabor wavelength must be >= 3");
    if (!(sigma_over_f > 0.0 && sigma_over_f < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "log-Gabor sigma_over_f must be in (0,1)");
    }
    if (!(min_amplitude >= 0.0)) throw Error(ErrorCode::InvalidArgument, "min_amplitude must be >= 0");
}

std::vector<double> log_gabor_transfer(int n, const LogGaborParams& params) {
    params.validate();
    std::vector<double> g(static_cast<std::size_t>(n), 0.0);
    const double f0 = 1.0 / params.wavelength;
    const double denom = 2.0 * std::pow(std::log(params.sigma_over_f), 2);
    for (int k = 1; k <= n / 2; ++k) {
        const double f = static_cast<double>(k) / n;
        g[static_cast<std::size_t>(k)] = std::exp(-std::pow(std::log(f / f0), 2) / denom);
    }
    return g;
}

LogGaborFilter::LogGaborFilter(int length, const LogGaborParams& params) {
    if (length < 8 || length % 2 != 0) {
        throw Error(ErrorCode::InvalidArgument,
                    "log-Gabor rows need an even length >= 8, got " + std::to_string(length));
    }
    const auto g = log_gabor_transfer(length, params);
    taps_.assign(static_cast<std::size_t>(length), {0.0, 0.0});
    // h[m] = (1/n) sum_k G[k] exp(+2 pi i k m / n)
    for (int m = 0; m < length; ++m) {
        std::complex<double> acc{0.0, 0.0};
        for (int k = 1; k <= length / 2; ++k) {
            const long phase_index = (static_cast<long>(k) * m) % length;
            const double ang = 2.0 * M_PI * static_cast<double>(phase_index) / length;
            acc += g[static_cast<std::size_t>(k)] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        taps_[static_cast<std::size_t>(m)] = acc / static_cast<double>(length);
    }
}

void LogGaborFilter::apply(std::span<const double> signal, std::span<std::complex<double>> out) const {
    const auto n = taps_.size();
    if (signal.size() != n || out.size() != n) {
        throw Error(ErrorCode::ShapeMismatch, "row length does not match the filter");
    }
    for (std::size_t i = 0; i < n; ++i) {
        double re = 0.0;
        double im = 0.0;
        std::size_t src = i;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = signal[src];
            re += v * taps_[j].real();
            im += v * taps_[j].imag();
            src = src == 0 ? n - 1 : src - 1;
        }
        out[i] = {re, im};
    }
}

std::vector<std::complex<double>> log_gabor_row(std::span<const double> signal,
                                                const LogGaborParams& params) {
    const LogGaborFilter filter(static_cast<int>(signal.size()), params);
    std::vector<std::complex<double>> out(signal.size());
    filter.apply(signal, out);
    return out;
}

IrisTemplate encode(const NormalizedPattern& pattern, const LogGaborParams& params) {
    params.validate();
    const int rows = pattern.radial_res();
    const int cols = pattern.angular_res();
    const auto total = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    if (pattern.masked_count() == total) {
        throw Error(ErrorCode::AllMasked, "every pattern sample is masked");
    }

    // Means are summed over sorted values so they do not depend on the
    // angular origin; this keeps encode exactly shift-covariant.
    const auto sorted_mean = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        double sum = 0.0;
        for (double x : v) sum += x;
        return sum / static_cast<double>(v.size());
    };
    std::vector<double> unmasked;
    unmasked.reserve(total);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (!pattern.masked(r, c)) unmasked.push_back(pattern.sample(r, c) / 255.0);
        }
    }
    const double global_mean = sorted_mean(unmasked);

    const LogGaborFilter filter(cols, params);
    IrisTemplate out(rows, cols);
    std::vector<double> row(static_cast<std::size_t>(cols));
    std::vector<std::complex<double>> response(static_cast<std::size_t>(cols));
    for (int r = 0; r < rows; ++r) {
        unmasked.clear();
        for (int c = 0; c < cols; ++c) {
            if (!pattern.masked(r, c)) unmasked.push_back(pattern.sample(r, c) / 255.0);
        }
        const double fill = unmasked.empty() ? global_mean : sorted_mean(unmasked);
        for (int c = 0; c < cols; ++c) {
            row[static_cast<std::size_t>(c)] = pattern.masked(r, c) ? fill : pattern.sample(r, c) / 255.0;
        }
        filter.apply(row, response);
        for (int c = 0; c < cols; ++c) {
            const auto z = response[static_cast<std::size_t>(c)];
            const auto [re_bit, im_bit] = quantize_phase(z);
            out.set_bit(r, 2 * c, re_bit);
            out.set_bit(r, 2 * c + 1, im_bit);
            if (pattern.masked(r, c) || std::abs(z) < params.min_amplitude) {
                out.set_sample_noise(r, c, true);
            }
        }
    }
    return out;
}

} // namespace iris
