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
#include <iosfwd>
#include <span>
#include <vector>

#include "aslt/chaos_kernels.hpp"
#include "aslt/gaussian_inputs.hpp"
#include "aslt/hermite.hpp"
#include "aslt/reference.hpp"
#include "aslt/report.hpp"

namespace aslt {

/// Hermite variation V_n = sum_{k<=n} H_q(X_k) of one path with both
/// normalizations G_n = V_n / sqrt(Var V_n) and G_hat_n = n^{q(1-H)-1} V_n.
struct VariationSeries {
    int q = 2;
    double hurst = 0.5;
    std::vector<double> V;
    std::vector<double> var_exact;
    std::vector<double> G;
    std::vector<double> G_hat;

    std::size_t size() const noexcept { return V.size(); }
};

VariationSeries variation_series(const GaussianPath& path, ChaosOrder q);
VariationSeries variation_series(std::span<const double> x, ChaosOrder q, double hurst);

/// Exact Var(V_n) = q! sum_{|a|<n} (n - |a|) rho(a)^q.
double variance_Vn(ChaosOrder q, double hurst, std::size_t n);

/// Var(V_1), ..., Var(V_N) in O(N).
std::vector<double> variance_Vn_prefix(ChaosOrder q, double hurst, std::size_t n_max);

/// G_n = X_n (2n)^{-1/2} sum_{j<n} (X_j^2 - 1) for n = 1..N, or the reversed
/// variant X_0 (2n)^{-1/2} sum_{1<=j<=n} (X_j^2 - 1). Needs X_0..X_N.
std::vector<double> product_series(std::span<const double> iid, bool reversed);

enum class Normalization { log, harmonic };
enum class SeriesKind { G, G_hat };

std::string_view to_string(Normalization n);

/// Atoms G_1..G_n with weights 1/k. Normalized either by log n (as in the
/// almost sure limit statements) or by the harmonic number H_n, which makes
/// it a probability measure.
class LogAverageMeasure {
public:
    explicit LogAverageMeasure(std::vector<double> atoms);
    /// Atoms paired with weights 1/k, k = 1..n, in the given order.
    static LogAverageMeasure prefix(std::span<const double> series, std::size_t n);

    std::size_t size() const noexcept { return atoms_.size(); }
    const std::vector<double>& atoms() const noexcept { return atoms_; }
    double normalizer(Normalization norm) const;

    double cdf(double x, Normalization norm = Normalization::harmonic) const;
    double cdf_left(double x, Normalization norm = Normalization::harmonic) const;
    /// (1/normalizer) sum_k e^{i t G_k} / k.
    std::complex<double> charfn(double t, Normalization norm = Normalization::harmonic) const;

    /// Sorted atom positions and the cumulative raw weight through each.
    const std::vector<double>& sorted_values() const noexcept { return sorted_values_; }
    const std::vector<double>& cumulative_weight() const noexcept { return cumulative_; }

private:
    std::vector<double> atoms_;
    std::vector<double> sorted_values_;  ///< distinct positions
    std::vector<double> cumulative_;     ///< raw weight sum of atoms <= sorted_values_[i]
    double harmonic_ = 0.0;
};

double log_average_cdf(const LogAverageMeasure& m, double x, Normalization norm);

/// sup_x |F_m(x) - F_ref(x)| under the harmonic normalizer, evaluated at both
/// one-sided limits of every atom (sufficient since F_m is a step function
/// and F_ref is monotone).
double ks_distance(const LogAverageMeasure& m, const ReferenceDistribution& ref);
double ks_distance(const LogAverageMeasure& a, const LogAverageMeasure& b);

struct WassersteinResult {
    double value = 0.0;       ///< int_{-L}^{L} |F_m - F_ref|
    double tail_bound = 0.0;  ///< bound on the integral outside the window
    double window = 12.0;
};

WassersteinResult wasserstein1(const LogAverageMeasure& m, const ReferenceDistribution& ref, double window = 12.0);
WassersteinResult wasserstein1(const LogAverageMeasure& a, const LogAverageMeasure& b, double window = 12.0);

/// Delta_n(t) = (1/log n) sum_{k<=n} (e^{i t G_k} - phi_ref(t)) / k. Needs n >= 2.
std::complex<double> delta_n(const LogAverageMeasure& m, const ReferenceDistribution& ref, double t);

/// `points` equally spaced values on [lo, hi]; default 41 points on [-5, 5].
std::vector<double> uniform_grid(double lo = -5.0, double hi = 5.0, std::size_t points = 41);

/// |Delta_n(t)|^2 for every n = 1..N of one series (entry 0 = n 1 is 0).
std::vector<double> delta_sq_path(std::span<const double> series, std::complex<double> phi_ref, double t);

/// Ibragimov-Lifshits partial sums S_N(t) = sum_{n=2}^N E|Delta_n(t)|^2 / (n log n),
/// expectation estimated across replicates; summand recorded at checkpoints.
ConditionReport il_sum(const std::vector<std::vector<double>>& replicates, const ReferenceDistribution& ref,
                       std::span<const double> t_grid, std::size_t n_max,
                       std::vector<std::size_t> checkpoints = {});

struct ScaledAtoms {
    std::vector<double> atoms;
    std::vector<std::size_t> zero_factor_indices;  ///< 1-based k with a_k == 0
};

/// Atoms a_k G_k, k = 1..n (weights stay 1/k). Requires a.size() >= G.size().
ScaledAtoms scale_series(std::span<const double> G, std::span<const double> a);

struct DistancePoint {
    std::size_t n = 0;
    double ks = 0.0;
    double w1 = 0.0;
    double w1_tail_bound = 0.0;
};

/// KS and W1 of the harmonic log-average measure of the first n atoms at each checkpoint.
std::vector<DistancePoint> distance_trajectory(std::span<const double> series, const ReferenceDistribution& ref,
                                               const std::vector<std::size_t>& checkpoints, double window = 12.0);

/// What a replicate produces: G (or G_hat) of fGn Hermite variations, or
/// the product families' explicit sequences.
struct SeriesSpec {
    KernelFamily family = KernelFamily::fgn(2, 0.5);
    std::size_t n = 1024;
    SeriesKind which = SeriesKind::G;
};

std::vector<double> simulate_series(const SeriesSpec& spec, std::uint64_t seed);

/// Replicate r uses derive_seed(master_seed, r); output independent of `threads`.
std::vector<std::vector<double>> simulate_replicates(const SeriesSpec& spec, std::size_t replicates,
                                                     std::uint64_t master_seed, unsigned threads = 1);

/// Atom dump "k,G_k,weight".
void write_atoms_csv(std::ostream& out, std::span<const double> series);

}  // namespace aslt
