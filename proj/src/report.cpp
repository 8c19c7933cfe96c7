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

#include "aslt/report.hpp"

#include <algorithm>
#include <ostream>

#include "aslt/error.hpp"
#include "aslt/io.hpp"

namespace aslt {

std::string_view to_string(ConditionId id) {
    switch (id) {
        case ConditionId::A1: return "A1";
        case ConditionId::A2: return "A2";
        case ConditionId::B1: return "B1";
        case ConditionId::B2: return "B2";
        case ConditionId::IL: return "IL";
    }
    return "?";
}

std::string_view to_string(Estimator e) { return e == Estimator::exact ? "exact" : "monte_carlo"; }

bool ConditionReport::nondecreasing() const {
    for (const auto& tr : trajectories) {
        for (std::size_t i = 1; i < tr.points.size(); ++i)
            if (tr.points[i].value < tr.points[i - 1].value) return false;
    }
    return true;
}

double ConditionReport::final_value() const {
    if (!sup_over_grid.empty()) return sup_over_grid.back().value;
    if (trajectories.empty() || trajectories.front().points.empty())
        throw Error(ErrorKind::domain, "condition report has no points");
    return trajectories.front().points.back().value;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

void ConditionReport::write_csv(std::ostream& out) const {
    out << "N,value,stderr\n";
    const std::vector<ReportPoint>* pts = nullptr;
    if (!sup_over_grid.empty()) {
        pts = &sup_over_grid;
    } else if (!trajectories.empty()) {
        pts = &trajectories.front().points;
    }
    if (pts == nullptr) return;
    for (const auto& p : *pts) out << p.n << ',' << format_double(p.value) << ',' << opt(p.stderr_value) << '\n';
}

void ConditionReport::write_long_csv(std::ostream& out) const {
    out << "n,t,statistic,value,stderr,normalizer\n";
    for (const auto& tr : trajectories) {
        const std::string t = opt(tr.t);
        for (const auto& p : tr.points) {
            out << p.n << ',' << t << ",partial_sum," << format_double(p.value) << ',' << opt(p.stderr_value) << ','
                << normalizer << '\n';
            if (p.summand) {
                out << p.n << ',' << t << ",summand," << format_double(*p.summand) << ',' << opt(p.summand_stderr)
                    << ',' << normalizer << '\n';
            }
        }
    }
    for (const auto& p : sup_over_grid) {
        out << p.n << ",,sup_partial_sum," << format_double(p.value) << ',' << opt(p.stderr_value) << ','
            << normalizer << '\n';
    }
}

nlohmann::json ConditionReport::sidecar() const {
    nlohmann::json j;
    j["condition"] = std::string(to_string(id));
    j["estimator"] = std::string(to_string(estimator));
    j["parameters"] = parameters;
    j["normalizer"] = normalizer;
    j["policy"] = policy;
    j["trajectories"] = trajectories.size();
    j["nondecreasing"] = nondecreasing();
    bool has_points = !sup_over_grid.empty() || (!trajectories.empty() && !trajectories.front().points.empty());
    if (has_points) j["final_value"] = final_value();
    return j;
}

std::vector<std::size_t> dyadic_checkpoints(std::size_t n_max, std::size_t n_min) {
    std::vector<std::size_t> out;
    if (n_max < n_min) return out;
    std::size_t c = 1;
    while (c < n_min) c *= 2;
    for (; c <= n_max; c *= 2) out.push_back(c);
    if (out.empty() || out.back() != n_max) out.push_back(n_max);
    return out;
}

}  // namespace aslt
