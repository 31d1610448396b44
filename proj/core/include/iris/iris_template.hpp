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
#include <span>
#include <vector>

namespace iris {

/// Binary iris code plus per-bit noise flags. Each row holds 2*A bits laid
/// out as interleaved (real, imaginary) pairs, one pair per angular sample.
/// Rows are packed into 64-bit words, bit i of a row at word i/64,
/// position i%64 (LSB first); padding bits are always zero.
class IrisTemplate {
public:
    IrisTemplate(int rows, int angular_res);

    int rows() const noexcept { return rows_; }
    int angular_res() const noexcept { return angular_res_; }
    int cols() const noexcept { return 2 * angular_res_; }
    std::size_t bit_count() const noexcept {
        return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols());
    }
    int words_per_row() const noexcept { return words_per_row_; }

    bool bit(int row, int col) const noexcept { return test(bits_, row, col); }
    bool noise(int row, int col) const noexcept { return test(noise_, row, col); }
    void set_bit(int row, int col, bool v) noexcept { assign(bits_, row, col, v); }
    void set_noise(int row, int col, bool v) noexcept { assign(noise_, row, col, v); }

    /// Sets both bits of angular sample `sample` together.
    void set_sample_noise(int row, int sample, bool v) noexcept {
        assign(noise_, row, 2 * sample, v);
        assign(noise_, row, 2 * sample + 1, v);
    }

    std::span<const std::uint64_t> bit_row(int row) const noexcept {
        return {bits_.data() + row_offset(row), static_cast<std::size_t>(words_per_row_)};
    }
    std::span<const std::uint64_t> noise_row(int row) const noexcept {
        return {noise_.data() + row_offset(row), static_cast<std::size_t>(words_per_row_)};
    }

    std::size_t noise_count() const noexcept;

    /// Circular shift by `positions` angular samples (2 bits each), noise
    /// moved identically: result sample j = this sample (j - positions) mod A.
    IrisTemplate rotated(int positions) const;

    bool same_shape(const IrisTemplate& other) const noexcept {
        return rows_ == other.rows_ && angular_res_ == other.angular_res_;
    }

    friend bool operator==(const IrisTemplate&, const IrisTemplate&) = default;

private:
    std::size_t row_offset(int row) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(words_per_row_);
    }
    bool test(const std::vector<std::uint64_t>& v, int row, int col) const noexcept {
        return (v[row_offset(row) + static_cast<std::size_t>(col >> 6)] >> (col & 63)) & 1u;
    }
    void assign(std::vector<std::uint64_t>& v, int row, int col, bool on) noexcept {
        auto& w = v[row_offset(row) + static_cast<std::size_t>(col >> 6)];
        const std::uint64_t m = std::uint64_t{1} << (col & 63);
        w = on ? (w | m) : (w & ~m);
    }

    int rows_;
    int angular_res_;
    int words_per_row_;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> noise_;
};

// Template file layout (all multi-byte integers big-endian):
//   0..3  magic "IRTP"
//   4     format version (1)
//   5     bit order tag ('M' = most-significant-bit first)
//   6..7  rows R
//   8..9  angular samples A
//   then R*2A code bits row-major, MSB-first, zero-padded to a byte,
//   then R*2A noise bits in the same layout.
std::vector<std::uint8_t> serialize_template(const IrisTemplate& t);
IrisTemplate deserialize_template(std::span<const std::uint8_t> bytes);

} // namespace iris
