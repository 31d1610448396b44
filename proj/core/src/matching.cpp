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

#include "iris/matching.hpp"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "iris/error.hpp"

namespace iris {

namespace {

/// Y's rows stored twice back to back so any circular shift of a row can be
/// read as straight 64-bit windows.
class DoubledRows {
public:
    explicit DoubledRows(const IrisTemplate& y)
        : rows_(y.rows()),
          row_bits_(y.cols()),
          words_(static_cast<int>((2 * static_cast<std::size_t>(y.cols()) + 128) / 64 + 1)),
          bits_(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(words_), 0),
          noise_(bits_.size(), 0) {
        for (int r = 0; r < rows_; ++r) {
            fill(y.bit_row(r), bits_.data() + offset(r));
            fill(y.noise_row(r), noise_.data() + offset(r));
        }
    }

    /// 64 bits of the row starting at bit `pos` of the doubled sequence.
    std::uint64_t bits(int row, std::size_t pos) const noexcept { return window(bits_, row, pos); }
    std::uint64_t noise(int row, std::size_t pos) const noexcept { return window(noise_, row, pos); }

private:
    std::size_t offset(int row) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(words_);
    }

    void fill(std::span<const std::uint64_t> src, std::uint64_t* dst) const noexcept {
        for (std::size_t w = 0; w < src.size(); ++w) dst[w] = src[w];
        // append a second copy starting at bit row_bits_
        const std::size_t base = static_cast<std::size_t>(row_bits_);
        for (std::size_t w = 0; w < src.size(); ++w) {
            const std::size_t pos = base + 64 * w;
            const std::size_t word = pos >> 6;
            const unsigned sh = static_cast<unsigned>(pos & 63);
            dst[word] |= src[w] << sh;
            if (sh != 0) dst[word + 1] |= src[w] >> (64 - sh);
        }
    }

    std::uint64_t window(const std::vector<std::uint64_t>& v, int row, std::size_t pos) const noexcept {
        const std::uint64_t* p = v.data() + offset(row) + (pos >> 6);
        const unsigned sh = static_cast<unsigned>(pos & 63);
        return sh == 0 ? p[0] : (p[0] >> sh) | (p[1] << (64 - sh));
    }

    int rows_;
    int row_bits_;
    int words_;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> noise_;
};

struct Counts {
    std::size_t differing = 0;
    std::size_t masked = 0;
};

Counts count_at_shift(const IrisTemplate& x, const DoubledRows& yd, int shift) {
    const int row_bits = x.cols();
    const int a = x.angular_res();
    const int s = ((shift % a) + a) % a;
    // shifted bit i reads y bit (i - 2s) mod L, which sits at i + L - 2s in the doubled row
    const std::size_t start = static_cast<std::size_t>(row_bits - 2 * s);
    const int wpr = x.words_per_row();
    const int tail = row_bits & 63;
    const std::uint64_t last_mask = tail == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << tail) - 1;

    Counts c;
    for (int r = 0; r < x.rows(); ++r) {
        const auto xb = x.bit_row(r);
        const auto xn = x.noise_row(r);
        for (int w = 0; w < wpr; ++w) {
            const std::size_t pos = start + 64 * static_cast<std::size_t>(w);
            const std::uint64_t valid = w == wpr - 1 ? last_mask : ~std::uint64_t{0};
            const std::uint64_t masked = (xn[w] | yd.noise(r, pos)) & valid;
            const std::uint64_t diff = (xb[w] ^ yd.bits(r, pos)) & ~masked & valid;
            c.differing += static_cast<std::size_t>(std::popcount(diff));
            c.masked += static_cast<std::size_t>(std::popcount(masked));
        }
    }
    return c;
}

void check_shapes(const IrisTemplate& x, const IrisTemplate& y) {
    if (!x.same_shape(y)) {
        throw Error(ErrorCode::ShapeMismatch, "templates have different shapes");
    }
}

} // namespace

HammingResult hamming_distance(const IrisTemplate& x, const IrisTemplate& y) {
    check_shapes(x, y);
    const DoubledRows yd(y);
    const Counts c = count_at_shift(x, yd, 0);
    const std::size_t n = x.bit_count();
    if (c.masked >= n) throw Error(ErrorCode::AllBitsMasked, "every bit is masked");
    HammingResult out;
    out.differing_bits = c.differing;
    out.effective_bits = n - c.masked;
    out.hd = static_cast<double>(c.differing) / static_cast<double>(out.effective_bits);
    return out;
}

MatchScore match_templates(const IrisTemplate& x, const IrisTemplate& y, int shift_budget) {
    check_shapes(x, y);
    if (shift_budget < 0) throw Error(ErrorCode::InvalidArgument, "shift budget must be >= 0");
    const DoubledRows yd(y);
    const std::size_t n = x.bit_count();

    bool found = false;
    std::size_t best_diff = 0;
    std::size_t best_eff = 1;
    MatchScore best;
    // visit 0, -1, +1, -2, +2, ... so a strict improvement test gives the tie rule
    for (int step = 0; step <= 2 * shift_budget; ++step) {
        const int s = step == 0 ? 0 : (step % 2 == 1 ? -(step + 1) / 2 : step / 2);
        const Counts c = count_at_shift(x, yd, s);
        if (c.masked >= n) continue;
        const std::size_t eff = n - c.masked;
        // compare c.differing / eff < best_diff / best_eff without rounding
        if (!found || c.differing * best_eff < best_diff * eff) {
            found = true;
            best_diff = c.differing;
            best_eff = eff;
            best.best_shift = s;
            best.effective_bits = eff;
        }
    }
    if (!found) throw Error(ErrorCode::AllBitsMasked, "every shift leaves no unmasked bits");
    best.hd = static_cast<double>(best_diff) / static_cast<double>(best_eff);
    return best;
}

} // namespace iris
