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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "iris/evaluation.hpp"
#include "iris/spoofsim.hpp"

namespace iris {

/// Layered `section.key = value` settings. Every key has a documented
/// default; unknown keys and invalid values raise ConfigError.
class Config {
public:
    Config();

    static Config from_text(const std::string& text);
    static Config from_file(const std::filesystem::path& path);

    /// Applies `section.key = value` lines on top of the current values.
    void merge_text(const std::string& text);
    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;

    static const std::vector<std::string>& known_keys();

    PipelineConfig pipeline() const;
    RecaptureParams recapture() const;
    PreprocessChain chain() const;
    std::uint64_t protocol_seed() const;
    std::vector<double> far_targets() const;

    /// Throws ConfigError if any value fails its module's invariants.
    void validate() const;

    /// Every key with its current value, sorted.
    std::string dump() const;

private:
    std::map<std::string, std::string> values_;
};

} // namespace iris
