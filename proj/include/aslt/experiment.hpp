/*
   Copyright 2026 The aslt Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "aslt/error.hpp"

namespace aslt {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
    std::filesystem::path out_dir = ".";
    unsigned threads = 1;
};

/// Applies "/json/pointer=value" overrides. The value is parsed as JSON and
/// taken as a plain string if that fails.
nlohmann::json apply_overrides(nlohmann::json config, const std::vector<std::string>& overrides);

/// Validates and runs one experiment, writing its outputs and manifest.json
/// into out_dir. Returns the manifest. Outputs depend on the config only.
nlohmann::json run_experiment(const nlohmann::json& config, const RunOptions& options);

/// 2 schema, 3 regime, 4 io, 5 format, 6 budget, 1 anything else.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace aslt
