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

#include <cstdint>
#include <random>

namespace aslt {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of replicate `index` under master seed `master`:
///   splitmix64(splitmix64(master) + (index + 1) * 0x9E3779B97F4A7C15).
/// Part of the reproducibility contract; do not change without a version bump.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Standard normal stream: std::mt19937_64 feeding the Box-Muller transform.
/// Uniforms are u = (bits >> 11 + 1) * 2^-53 in (0, 1]. Each transform yields
/// two variates, returned in order (cos branch first).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double operator()();

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    double uniform_open0();

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace aslt
