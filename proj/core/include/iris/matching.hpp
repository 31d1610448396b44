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

#include <cstddef>

#include "iris/iris_template.hpp"

namespace iris {

struct HammingResult {
    double hd = 0.0;
    std::size_t differing_bits = 0;
    std::size_t effective_bits = 0;
};

struct MatchScore {
    double hd = 0.0;
    int best_shift = 0;
    std::size_t effective_bits = 0;
};

/// Noise-masked fractional Hamming distance: differing bits where neither
/// noise flag is set, over the count of bits where neither flag is set.
HammingResult hamming_distance(const IrisTemplate& x, const IrisTemplate& y);

/// Minimum masked HD over shifts s in [-budget, budget] of y (and its noise)
/// by whole angular samples. Ties prefer smaller |s|, then negative s.
/// Shifts whose masks cover every bit are skipped; AllBitsMasked is thrown
/// only when every shift is skipped.
MatchScore match_templates(const IrisTemplate& x, const IrisTemplate& y, int shift_budget = 8);

} // namespace iris
