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

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace aslt {

enum class ConditionId { A1, A2, B1, B2, IL };
enum class Estimator { exact, monte_carlo };

std::string_view to_string(ConditionId id);
std::string_view to_string(Estimator e);

struct ReportPoint {
    std::size_t n = 0;
    double value = 0.0;                 ///< partial sum through n
    std::optional<double> stderr_value;
    std::optional<double> summand;      ///< inner quantity at checkpoint n
    std::optional<double> summand_stderr;
};

/// Partial sums for one value of the free parameter (t for B1/IL).
struct Trajectory {
    std::optional<double> t;
    std::vector<ReportPoint> points;
};

struct ConditionReport {
    ConditionId id = ConditionId::A1;
    Estimator estimator = Estimator::exact;
    nlohmann::json parameters = nlohmann::json::object();
    std::string normalizer;  ///< "log", "harmonic" or "none"
    std::string policy;      ///< checkpoint/interpolation policy in effect
    std::vector<Trajectory> trajectories;
    std::vector<ReportPoint> sup_over_grid;  ///< t-indexed conditions only

    /// Partial sums of every trajectory never decrease.
    bool nondecreasing() const;

    /// Final partial sum (sup over grid when t-indexed).
    double final_value() const;

    /// "N,value,stderr": the single trajectory, or the sup over the grid.
    void write_csv(std::ostream& out) const;
    /// Long format "n,t,statistic,value,stderr,normalizer".
    void write_long_csv(std::ostream& out) const;
    nlohmann::json sidecar() const;
};

/// 2, 4, 8, ... up to n_max, plus n_max itself when it is not a power of two.
std::vector<std::size_t> dyadic_checkpoints(std::size_t n_max, std::size_t n_min = 2);

}  // namespace aslt
