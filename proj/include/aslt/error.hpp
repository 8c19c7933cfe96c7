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

#include <stdexcept>
#include <string>

namespace aslt {

/// Broad failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
    domain,   ///< argument outside the mathematical domain of an operation
    budget,   ///< problem size exceeds a configured computational budget
    regime,   ///< parameters select the wrong limit family
    numeric,  ///< a factorization or embedding failed numerically
    format,   ///< malformed, truncated or inconsistent persisted data
    io,       ///< filesystem failure
    schema,   ///< invalid experiment configuration
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace aslt
