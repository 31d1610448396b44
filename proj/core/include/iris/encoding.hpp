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

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "iris/iris_template.hpp"
#include "iris/normalization.hpp"

namespace iris {

struct LogGaborParams {
    double wavelength = 18.0;   ///< center wavelength in samples
    double sigma_over_f = 0.5;  ///< bandwidth ratio
    double min_amplitude = 1e-4;

    void validate() const;
};

/// One-sided log-Gabor transfer function sampled at DFT bins 0..n-1:
/// G(k/n) for 1 <= k <= n/2, zero at DC and at negative frequencies.
std::vector<double> log_gabor_transfer(int n, const LogGaborParams& params);

/// Circular log-Gabor filter for rows of a fixed length, stored as its
/// complex impulse response so each output is a direct circular sum.
class LogGaborFilter {
public:
    LogGaborFilter(int length, const LogGaborParams& params);

    int length() const noexcept { return static_cast<int>(taps_.size()); }

    /// out[n] = sum_j signal[(n - j) mod A] * h[j], summed in j order.
    void apply(std::span<const double> signal, std::span<std::complex<double>> out) const;

private:
    std::vector<std::complex<double>> taps_;
};

/// Analytic log-Gabor response of one circular row; A >= 8 and even.
std::vector<std::complex<double>> log_gabor_row(std::span<const double> signal,
                                                const LogGaborParams& params);

/// Grey-coded quadrant bits (real >= 0, imag >= 0).
inline std::pair<bool, bool> quantize_phase(std::complex<double> z) noexcept {
    return {z.real() >= 0.0, z.imag() >= 0.0};
}

/// Samples are scaled to [0,1]; masked samples take the row mean of the
/// unmasked ones before filtering. A sample's two noise bits are set when it
/// was masked or its response magnitude is below min_amplitude.
IrisTemplate encode(const NormalizedPattern& pattern, const LogGaborParams& params = {});

} // namespace iris
