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

#include <benchmark/benchmark.h>

#include <random>

#include "iris/canny.hpp"
#include "iris/encoding.hpp"
#include "iris/filters.hpp"
#include "iris/matching.hpp"
#include "iris/normalization.hpp"
#include "iris/segmentation.hpp"
#include "iris/spoofsim.hpp"

using namespace iris;

namespace {

IrisTemplate random_template(std::mt19937_64& rng, double noise_fraction) {
    IrisTemplate t(20, 240);
    std::bernoulli_distribution bit(0.5), noise(noise_fraction);
    for (int r = 0; r < t.rows(); ++r)
        for (int c = 0; c < t.cols(); ++c) {
            t.set_bit(r, c, bit(rng));
            t.set_noise(r, c, noise(rng));
        }
    return t;
}

const GrayImage& sample_eye() {
    static const GrayImage img = [] {
        EyeParams p;
        p.eyelid_coverage = 0.08;
        p.sensor_noise_sigma = 3.0;
        p.noise_seed = 4;
        return render_synthetic_eye(p);
    }();
    return img;
}

void BM_MatchTemplates(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto a = random_template(rng, 0.2);
    const auto b = random_template(rng, 0.2);
    const int budget = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(match_templates(a, b, budget));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MatchTemplates)->Arg(0)->Arg(8)->Arg(16);

void BM_HoughCircle(benchmark::State& state) {
    const auto edges = canny_edges(sample_eye());
    for (auto _ : state) benchmark::DoNotOptimize(hough_circle(edges, 60, 150));
}
BENCHMARK(BM_HoughCircle)->Unit(benchmark::kMillisecond);

void BM_CannyEdges(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(canny_edges(sample_eye()));
}
BENCHMARK(BM_CannyEdges)->Unit(benchmark::kMillisecond);

void BM_SegmentEye(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(segment_eye(sample_eye()));
}
BENCHMARK(BM_SegmentEye)->Unit(benchmark::kMillisecond);

void BM_Encode(benchmark::State& state) {
    const auto pattern = normalize(sample_eye(), segment_eye(sample_eye()));
    for (auto _ : state) benchmark::DoNotOptimize(encode(pattern));
}
BENCHMARK(BM_Encode)->Unit(benchmark::kMicrosecond);

void BM_Morphology(benchmark::State& state) {
    const auto se = StructuringElement::disk(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(open(sample_eye(), se));
}
BENCHMARK(BM_Morphology)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
