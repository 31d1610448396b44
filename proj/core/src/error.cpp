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

#include "iris/error.hpp"

namespace iris {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::MalformedHeader: return "malformed header";
    case ErrorCode::TruncatedData: return "truncated data";
    case ErrorCode::IoError: return "io error";
    case ErrorCode::NoCircleFound: return "no circle found";
    case ErrorCode::NoLineFound: return "no line found";
    case ErrorCode::SegmentationFailure: return "segmentation failure";
    case ErrorCode::DegenerateGeometry: return "degenerate geometry";
    case ErrorCode::AllMasked: return "all samples masked";
    case ErrorCode::ShapeMismatch: return "shape mismatch";
    case ErrorCode::AllBitsMasked: return "all bits masked";
    case ErrorCode::ManifestInvalid: return "invalid manifest";
    case ErrorCode::EmptyAfterSegmentation: return "empty after segmentation";
    case ErrorCode::EmptyScores: return "empty scores";
    case ErrorCode::ConfigError: return "config error";
    }
    return "unknown error";
}

} // namespace iris
