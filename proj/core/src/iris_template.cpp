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

#include "iris/iris_template.hpp"

#include <bit>
#include <string>

#include "iris/error.hpp"

namespace iris {

namespace {

constexpr std::uint8_t kMagic[4] = {'I', 'R', 'T', 'P'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kMsbFirst = 'M';
constexpr std::size_t kHeaderSize = 10;

} // namespace

IrisTemplate::IrisTemplate(int rows, int angular_res)
    : rows_(rows), angular_res_(angular_res), words_per_row_((2 * angular_res + 63) / 64) {
    if (rows < 1 || angular_res < 1) {
        throw Error(ErrorCode::InvalidArgument, "template dimensions must be positive");
    }
    const auto n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(words_per_row_);
    bits_.assign(n, 0);
    noise_.assign(n, 0);
}

std::size_t IrisTemplate::noise_count() const noexcept {
    std::size_t n = 0;
    for (auto w : noise_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

IrisTemplate IrisTemplate::rotated(int positions) const {
    IrisTemplate out(rows_, angular_res_);
    const int a = angular_res_;
    const int k = ((positions % a) + a) % a;
    for (int r = 0; r < rows_; ++r) {
        for (int j = 0; j < a; ++j) {
            const int src = (j - k + a) % a;
            for (int b = 0; b < 2; ++b) {
                out.set_bit(r, 2 * j + b, bit(r, 2 * src + b));
                out.set_noise(r, 2 * j + b, noise(r, 2 * src + b));
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> serialize_template(const IrisTemplate& t) {
    if (t.rows() > 0xFFFF || t.angular_res() > 0xFFFF) {
        throw Error(ErrorCode::InvalidArgument, "template too large to serialize");
    }
    const std::size_t nbits = t.bit_count();
    const std::size_t section = (nbits + 7) / 8;
    std::vector<std::uint8_t> out(kHeaderSize + 2 * section, 0);
    std::copy(std::begin(kMagic), std::end(kMagic), out.begin());
    out[4] = kVersion;
    out[5] = kMsbFirst;
    out[6] = static_cast<std::uint8_t>(t.rows() >> 8);
    out[7] = static_cast<std::uint8_t>(t.rows() & 0xFF);
    out[8] = static_cast<std::uint8_t>(t.angular_res() >> 8);
    out[9] = static_cast<std::uint8_t>(t.angular_res() & 0xFF);

    std::size_t i = 0;
    for (int r = 0; r < t.rows(); ++r) {
        for (int c = 0; c < t.cols(); ++c, ++i) {
            const auto mask = static_cast<std::uint8_t>(0x80u >> (i % 8));
            if (t.bit(r, c)) out[kHeaderSize + i / 8] |= mask;
            if (t.noise(r, c)) out[kHeaderSize + section + i / 8] |= mask;
        }
    }
    return out;
}

IrisTemplate deserialize_template(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
        throw Error(ErrorCode::MalformedHeader, "not an iris template (bad magic)");
    }
    if (bytes[4] != kVersion) {
        throw Error(ErrorCode::MalformedHeader, "unsupported template version " + std::to_string(bytes[4]));
    }
    if (bytes[5] != kMsbFirst) {
        throw Error(ErrorCode::MalformedHeader, "unsupported template bit order");
    }
    const int rows = (bytes[6] << 8) | bytes[7];
    const int angular = (bytes[8] << 8) | bytes[9];
    if (rows < 1 || angular < 1) {
        throw Error(ErrorCode::MalformedHeader, "template dimensions must be positive");
    }
    IrisTemplate t(rows, angular);
    const std::size_t section = (t.bit_count() + 7) / 8;
    if (bytes.size() < kHeaderSize + 2 * section) {
        throw Error(ErrorCode::TruncatedData, "template payload shorter than its header states");
    }
    std::size_t i = 0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < t.cols(); ++c, ++i) {
            const auto mask = static_cast<std::uint8_t>(0x80u >> (i % 8));
            t.set_bit(r, c, (bytes[kHeaderSize + i / 8] & mask) != 0);
            t.set_noise(r, c, (bytes[kHeaderSize + section + i / 8] & mask) != 0);
        }
    }
    return t;
}

} // namespace iris
