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
#include <span>
#include <vector>

#include "aslt/chaos_kernels.hpp"
#include "aslt/chaos_stats.hpp"
#include "aslt/reference.hpp"
#include "aslt/report.hpp"

namespace aslt {

/// sum_{n=2}^N (1/(n log^2 n)) sum_{k<=n} ||g_k (x)_r g_k|| / k, 1 <= r <= q-1.
/// Empty checkpoints select dyadic ones.
ConditionReport condition_a1(const KernelFamily& family, int r, std::size_t n_max,
                             std::vector<std::size_t> checkpoints = {});

/// sum_{n=2}^N (1/(n log^3 n)) sum_{k,l<=n} |E[G_k G_l]| / (kl), E[G_k G_l] = q! <g_k, g_l>,
/// optionally divided by sqrt(E[G_k^2] E[G_l^2]).
ConditionReport condition_a2(const KernelFamily& family, std::size_t n_max, bool normalized,
                             std::vector<std::size_t> checkpoints = {});

struct PhiSource {
    enum class Kind { exact_q2, monte_carlo };

    Kind kind = Kind::exact_q2;
    std::size_t replicates = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    /// Exact source: every k up to this bound, dyadic k beyond (held constant in between).
    std::size_t exact_every_k_up_to = 512;
    std::size_t eigen_budget = kToeplitzEigenBudget;
};

/// sum_{n=2}^N (1/(n log^3 n)) |sum_{k<=n} (phi_k(t) - phi_ref(t)) / k|^2 per t, with sup over the grid.
ConditionReport condition_b1(int q, double hurst, const ReferenceDistribution& ref, std::span<const double> t_grid,
                             std::size_t n_max, const PhiSource& source, SeriesKind which = SeriesKind::G,
                             std::vector<std::size_t> checkpoints = {});

/// sum_{n=2}^N (1/(n log^3 n)) Var(sum_{k<=n} G_k^2 / k), variance across
/// replicates at checkpoints (jackknife stderr), held between checkpoints.
ConditionReport condition_b2(const std::vector<std::vector<double>>& replicates, std::size_t n_max,
                             std::vector<std::size_t> checkpoints = {});

/// Cov(G_k^2, G_l^2) = 2 E[G_k G_l]^2 + q!^2 sum_r C(q,r)^2 ||g_k (x)_r g_l||^2
///                   + sum_r r!^2 C(q,r)^4 (2q-2r)! ||g_k (x~)_r g_l||^2, for kernels with E[G^2] = 1.
struct CovarianceTerms {
    double mean_term = 0.0;                 ///< 2 (E[G_k G_l])^2
    std::vector<double> contraction_terms;  ///< r = 1..q-1
    std::vector<double> symmetrized_terms;  ///< r = 1..q-1
    double covariance = 0.0;
    double correlation = 0.0;  ///< E[G_k G_l]
};

/// Tensor-oracle evaluation; orthonormal families only (product families,
/// fgn at H = 1/2), k, l <= 64.
CovarianceTerms covariance_g2_terms(const KernelFamily& family, std::size_t k, std::size_t l);
double covariance_g2(const KernelFamily& family, std::size_t k, std::size_t l);

/// E[G_n^4] - 3 = Cov(G_n^2, G_n^2) - 2.
double fourth_moment_gap(const KernelFamily& family, std::size_t n);

/// Exact law of the normalized quadratic variation (q = 2):
/// V_n = sum_j lambda_j (Z_j^2 - 1), lambda = spectrum of the correlation matrix.
class ExactQ2Law {
public:
    ExactQ2Law(double hurst, std::size_t n, SeriesKind which = SeriesKind::G,
               std::size_t eigen_budget = kToeplitzEigenBudget);

    /// prod_j (1 - 2 i s lambda_j)^{-1/2} e^{-i s lambda_j}, s = t / sigma.
    std::complex<double> charfn(double t) const;

    double sigma() const noexcept { return sigma_; }  ///< V_n = sigma * (normalized variable)
    double variance() const;                          ///< of the normalized variable
    double skewness() const;                          ///< 8 sum lambda^3 / (2 sum lambda^2)^{3/2}
    double excess_kurtosis() const;                   ///< 48 sum lambda^4 / (2 sum lambda^2)^2
    const std::vector<double>& eigenvalues() const noexcept { return lambda_; }

    /// Quantiles at the given probabilities by Gil-Pelaez inversion of charfn.
    std::vector<double> quantiles(std::span<const double> probabilities) const;

private:
    std::vector<double> lambda_;
    double sigma_ = 1.0;
};

std::complex<double> charfn_exact_q2(double hurst, std::size_t n, double t, SeriesKind which = SeriesKind::G);

struct CharfnEstimate {
    std::complex<double> mean;
    double stderr_re = 0.0;
    double stderr_im = 0.0;
};

/// Sample average of e^{i t x} with componentwise standard errors.
CharfnEstimate empirical_charfn(std::span<const double> samples, double t);

/// max over t != 0 of |phi_{k,l}(t) - phi_k(t) phi_l(-t)| / (|t| Cov(G_k^2, G_l^2)),
/// phi_{k,l} the characteristic function of G_k - G_l, from paired samples.
double covariance_bound_ratio(std::span<const double> gk, std::span<const double> gl, double cov_sq,
                              std::span<const double> t_grid);

}  // namespace aslt
