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


#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "iris/encoding.hpp"
#include "iris/error.hpp"
#include "iris/iris_template.hpp"
#include "test_util.hpp"

using namespace iris;
using cd = std::complex<double>;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

double g_formula(int k, int n, const LogGaborParams& p) {
    if (k < 1 || k > n / 2) return 0.0;
    const double f = static_cast<double>(k) / n;
    const double l = std::log(f * p.wavelength);
    const double s = std::log(p.sigma_over_f);
    return std::exp(-(l * l) / (2 * s * s));
}

// Naive DFT -> multiply by G -> naive inverse DFT.
std::vector<cd> dft_route(const std::vector<double>& x, const LogGaborParams& p) {
    const int n = static_cast<int>(x.size());
    std::vector<cd> spec(n), out(n);
    for (int k = 0; k < n; ++k) {
        cd acc = 0;
        for (int t = 0; t < n; ++t) acc += x[t] * std::polar(1.0, -2 * M_PI * k * t / n);
        spec[k] = acc * g_formula(k, n, p);
    }
    for (int t = 0; t < n; ++t) {
        cd acc = 0;
        for (int k = 0; k < n; ++k) acc += spec[k] * std::polar(1.0, 2 * M_PI * k * t / n);
        out[t] = acc / static_cast<double>(n);
    }
    return out;
}

std::vector<double> random_row(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> row(n);
    for (auto& v : row) v = u(rng);
    return row;
}

NormalizedPattern random_pattern(std::mt19937& rng, int rows, int cols) {
    std::uniform_real_distribution<double> u(0.0, 255.0);
    NormalizedPattern p(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) p.sample(r, c) = u(rng);
    return p;
}

} // namespace

TEST(LogGabor, TransferMatchesFormula) {
    const LogGaborParams p;
    const auto g = log_gabor_transfer(240, p);
    ASSERT_EQ(g.size(), 240u);
    for (int k = 0; k < 240; ++k) EXPECT_NEAR(g[k], g_formula(k, 240, p), 1e-12) << k;
    EXPECT_EQ(g[0], 0.0);
}

TEST(LogGabor, DirectSumMatchesDftRoute) {
    std::mt19937 rng(23);
    for (int n : {8, 30, 64, 240}) {
        for (const LogGaborParams p : {LogGaborParams{}, LogGaborParams{6.0, 0.65, 1e-4}}) {
            const auto x = random_row(rng, n);
            const auto got = log_gabor_row(x, p);
            const auto want = dft_route(x, p);
            ASSERT_EQ(got.size(), want.size());
            for (int t = 0; t < n; ++t) EXPECT_NEAR(std::abs(got[t] - want[t]), 0.0, 1e-9) << n << ":" << t;
        }
    }
}

TEST(LogGabor, ConstantRowHasNoResponse) {
    const auto out = log_gabor_row(std::vector<double>(64, 0.7), LogGaborParams{});
    for (const auto& z : out) EXPECT_LT(std::abs(z), 1e-12);
}

TEST(LogGabor, PeakResponseAtCenterFrequency) {
    const int n = 240;
    const LogGaborParams p; // f0 = 1/18, i.e. bin 13.3
    int best_k = 0;
    double best = -1;
    for (int k = 1; k < n / 2; ++k) {
        std::vector<double> x(n);
        for (int t = 0; t < n; ++t) x[t] = std::cos(2 * M_PI * k * t / n);
        const auto out = log_gabor_row(x, p);
        double mag = 0;
        for (const auto& z : out) mag = std::max(mag, std::abs(z));
        if (mag > best) {
            best = mag;
            best_k = k;
        }
    }
    EXPECT_EQ(best_k, 13);
}

TEST(LogGabor, Linear) {
    std::mt19937 rng(29);
    const auto x = random_row(rng, 48), y = random_row(rng, 48);
    std::vector<double> z(48);
    for (int i = 0; i < 48; ++i) z[i] = 2.5 * x[i] - 0.75 * y[i];
    const LogGaborParams p;
    const auto rx = log_gabor_row(x, p), ry = log_gabor_row(y, p), rz = log_gabor_row(z, p);
    for (int i = 0; i < 48; ++i) EXPECT_NEAR(std::abs(rz[i] - (2.5 * rx[i] - 0.75 * ry[i])), 0.0, 1e-12);
}

TEST(LogGabor, RejectsBadShapesAndParams) {
    EXPECT_EQ(code_of([] { log_gabor_row(std::vector<double>(6), LogGaborParams{}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { log_gabor_row(std::vector<double>(9), LogGaborParams{}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { LogGaborParams{2.0, 0.5, 1e-4}.validate(); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { LogGaborParams{18.0, 1.0, 1e-4}.validate(); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { LogGaborParams{18.0, 0.5, -1.0}.validate(); }), ErrorCode::InvalidArgument);
}

TEST(PhaseQuantization, QuadrantCodes) {
    const auto at = [](double deg) { return quantize_phase(std::polar(1.0, deg * M_PI / 180.0)); };
    EXPECT_EQ(at(45), std::make_pair(true, true));
    EXPECT_EQ(at(135), std::make_pair(false, true));
    EXPECT_EQ(at(225), std::make_pair(false, false));
    EXPECT_EQ(at(315), std::make_pair(true, false));
}

TEST(Encode, ShapeAndDeterminism) {
    std::mt19937 rng(31);
    const auto p = random_pattern(rng, 20, 240);
    const auto a = encode(p);
    EXPECT_EQ(a.rows(), 20);
    EXPECT_EQ(a.cols(), 480);
    EXPECT_EQ(a.bit_count(), 9600u);
    EXPECT_EQ(encode(p), a);
}

TEST(Encode, SmallFixedPatternIsStable) {
    NormalizedPattern p(4, 16);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 16; ++c) p.sample(r, c) = (r * 37 + c * 11) % 256;
    const auto t = encode(p, LogGaborParams{4.0, 0.5, 1e-4});
    // Expected bits from the DFT route, computed here independently.
    for (int r = 0; r < 4; ++r) {
        std::vector<double> row(16);
        for (int c = 0; c < 16; ++c) row[c] = p.sample(r, c) / 255.0;
        const auto z = dft_route(row, LogGaborParams{4.0, 0.5, 1e-4});
        for (int c = 0; c < 16; ++c) {
            if (std::abs(z[c].real()) < 1e-9 || std::abs(z[c].imag()) < 1e-9) continue; // sign on a knife edge
            EXPECT_EQ(t.bit(r, 2 * c), z[c].real() >= 0);
            EXPECT_EQ(t.bit(r, 2 * c + 1), z[c].imag() >= 0);
        }
    }
}

TEST(Encode, ConstantPatternIsAllNoise) {
    NormalizedPattern p(5, 32);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 32; ++c) p.sample(r, c) = 100;
    EXPECT_EQ(encode(p).noise_count(), 5u * 64);
}

TEST(Encode, AllMaskedRejected) {
    NormalizedPattern p(3, 16);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 16; ++c) p.set_masked(r, c, true);
    EXPECT_EQ(code_of([&] { encode(p); }), ErrorCode::AllMasked);
}

TEST(Encode, MaskedSamplesFlagBothBits) {
    std::mt19937 rng(37);
    auto p = random_pattern(rng, 6, 64);
    p.set_masked(2, 10, true);
    p.set_masked(5, 63, true);
    const auto t = encode(p);
    EXPECT_TRUE(t.noise(2, 20) && t.noise(2, 21));
    EXPECT_TRUE(t.noise(5, 126) && t.noise(5, 127));
    for (int r = 0; r < t.rows(); ++r)
        for (int j = 0; j < t.angular_res(); ++j) EXPECT_EQ(t.noise(r, 2 * j), t.noise(r, 2 * j + 1));
}

TEST(Encode, MaskedSamplesTakeRowMean) {
    std::mt19937 rng(41);
    auto p = random_pattern(rng, 2, 32);
    auto filled = p;
    p.set_masked(0, 5, true);
    p.sample(0, 5) = 255.0; // ignored
    double sum = 0;
    for (int c = 0; c < 32; ++c)
        if (c != 5) sum += p.sample(0, c);
    filled.sample(0, 5) = sum / 31.0;
    const auto a = encode(p), b = encode(filled);
    for (int c = 0; c < 64; ++c) {
        if (c / 2 == 5) continue;
        EXPECT_EQ(a.bit(0, c), b.bit(0, c)) << c;
    }
}

TEST(Encode, ShiftCovarianceIsExact) {
    std::mt19937 rng(43);
    const auto p = random_pattern(rng, 8, 240);
    const auto t = encode(p);
    for (int k : {1, 7, -3, 120}) {
        NormalizedPattern s(8, 240);
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 240; ++c) s.sample(r, ((c + k) % 240 + 240) % 240) = p.sample(r, c);
        EXPECT_EQ(encode(s), t.rotated(k)) << k;
    }
}

TEST(Encode, MaskingMoreNeverClearsNoise) {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_pattern(rng, 4, 64);
        const auto before = encode(p);
        std::uniform_int_distribution<int> r(0, 3), c(0, 63);
        for (int i = 0; i < 10; ++i) p.set_masked(r(rng), c(rng), true);
        const auto after = encode(p);
        for (int row = 0; row < 4; ++row)
            for (int col = 0; col < 128; ++col)
                if (before.noise(row, col)) EXPECT_TRUE(after.noise(row, col));
    }
}

TEST(TemplateFile, HeaderAndBitOrder) {
    IrisTemplate t(2, 8); // 16 bits per row
    t.set_bit(0, 0, true);
    t.set_bit(0, 9, true);
    t.set_bit(1, 15, true);
    t.set_sample_noise(1, 0, true);
    const auto bytes = serialize_template(t);
    const std::vector<std::uint8_t> expect = {'I', 'R', 'T', 'P', 1, 'M', 0, 2, 0, 8,
                                              0x80, 0x40, 0x00, 0x01,  // bits
                                              0x00, 0x00, 0xC0, 0x00}; // noise
    EXPECT_EQ(bytes, expect);
    EXPECT_EQ(deserialize_template(bytes), t);
}

TEST(TemplateFile, RoundTripsRandomTemplates) {
    std::mt19937_64 rng(53);
    for (auto [rows, a] : {std::pair{20, 240}, std::pair{3, 13}, std::pair{1, 8}}) {
        const auto t = test::random_template(rng, rows, a, 0.2);
        EXPECT_EQ(deserialize_template(serialize_template(t)), t);
    }
}

TEST(TemplateFile, RejectsCorruptInput) {
    std::mt19937_64 rng(59);
    auto bytes = serialize_template(test::random_template(rng, 4, 16, 0.1));
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_EQ(code_of([&] { deserialize_template(bad_magic); }), ErrorCode::MalformedHeader);
    auto short_payload = bytes;
    short_payload.pop_back();
    EXPECT_EQ(code_of([&] { deserialize_template(short_payload); }), ErrorCode::TruncatedData);
    EXPECT_EQ(code_of([&] { deserialize_template(std::span(bytes.data(), 5)); }), ErrorCode::MalformedHeader);
}

TEST(TemplateRotation, MovesSamplePairs) {
    IrisTemplate t(1, 8);
    t.set_bit(0, 2, true);  // sample 1, real bit
    t.set_noise(0, 3, true);
    const auto r = t.rotated(2);
    EXPECT_TRUE(r.bit(0, 6));
    EXPECT_TRUE(r.noise(0, 7));
    EXPECT_EQ(r.rotated(-2), t);
    EXPECT_EQ(t.rotated(8), t);
}
