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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace aslt {

/// Limit law against which log-average measures are compared. Analytic
/// kinds evaluate closed forms; table kinds carry a sorted quantile table at
/// probabilities p_i (uniform grid (i + 1/2)/M for built tables) and use the
/// piecewise-linear CDF through (q_i, p_i), 0 below q_0 and 1 from q_{M-1}.
class ReferenceDistribution {
public:
    enum class Kind { std_normal, product_normal, hermite_table, custom_table };

    static ReferenceDistribution std_normal();
    static ReferenceDistribution product_normal();

    /// Validated table; probabilities strictly increasing in (0, 1],
    /// quantiles nondecreasing. Throws ErrorKind::format otherwise.
    static ReferenceDistribution from_table(Kind kind, std::vector<double> probabilities,
                                            std::vector<double> quantiles, nlohmann::json metadata = {});

    /// Equal-weight sample, sorted into a table at p_i = (i + 1/2)/M.
    static ReferenceDistribution from_samples(std::vector<double> samples, Kind kind = Kind::custom_table,
                                              nlohmann::json metadata = {});

    static ReferenceDistribution point_mass(double location);

    Kind kind() const noexcept { return kind_; }
    bool is_table() const noexcept { return kind_ == Kind::hermite_table || kind_ == Kind::custom_table; }

    double cdf(double x) const;
    /// Left limit F(x-).
    double cdf_left(double x) const;
    /// Integral of the CDF over [a, b].
    double cdf_integral(double a, double b) const;
    /// int_{-inf}^x F = E(x - X)^+.
    double antiderivative(double x) const;
    double mean() const;
    std::complex<double> charfn(double t) const;
    /// E|X| under the law.
    double abs_first_moment() const;

    /// Law of c X for c > 0.
    ReferenceDistribution scaled(double c) const;
    double scale() const noexcept { return scale_; }

    const std::vector<double>& probabilities() const noexcept { return probabilities_; }
    const std::vector<double>& quantiles() const noexcept { return quantiles_; }
    const nlohmann::json& metadata() const noexcept { return metadata_; }

    std::string kind_name() const;

private:
    ReferenceDistribution(Kind kind) : kind_(kind) {}

    double base_cdf(double x) const;
    double base_cdf_left(double x) const;
    double base_antiderivative(double x) const;

    Kind kind_;
    double scale_ = 1.0;
    std::vector<double> probabilities_;
    std::vector<double> quantiles_;
    std::vector<double> cumulative_area_;  ///< integral of the table CDF from q_0 to q_i
    nlohmann::json metadata_;
};

/// Standard normal CDF, 0.5 erfc(-x / sqrt 2).
double normal_cdf(double x);

/// CDF of X Y for independent standard normals X, Y:
/// 1/2 + sign(x) G(|x|) / pi with G(x) = int_0^x K_0. Series for x <= 2,
/// Gauss-Legendre panels over cached nodes beyond.
double product_normal_cdf(double x);

struct HermiteReferenceConfig {
    double hurst = 0.9;
    int q = 2;
    std::size_t n = std::size_t{1} << 14;
    std::size_t replicates = 20000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string build_date = "unset";
};

/// Simulated law of G_N = V_N / sqrt(Var V_N) for fGn Hermite variations in
/// the long-range regime H > 1 - 1/(2q); throws ErrorKind::regime otherwise.
ReferenceDistribution build_hermite_reference(const HermiteReferenceConfig& config);

/// Versioned text format: "ASLTREF v1", one JSON metadata line, "p,quantile"
/// header, M data rows, then "#checksum=<FNV-1a 64 hex>" over all prior bytes.
void save_reference(const ReferenceDistribution& ref, std::ostream& out);
void save_reference(const ReferenceDistribution& ref, const std::filesystem::path& path);
ReferenceDistribution load_reference(std::istream& in);
ReferenceDistribution load_reference(const std::filesystem::path& path);

}  // namespace aslt
