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
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace aslt {

/// Stationary correlation of fractional Gaussian noise with Hurst index H:
/// rho(a) = (|a+1|^{2H} + |a-1|^{2H} - 2|a|^{2H}) / 2.
class CorrelationFn {
public:
    explicit CorrelationFn(double hurst);

    double hurst() const noexcept { return hurst_; }

    double operator()(long long lag) const noexcept;

    /// rho(0), ..., rho(n-1).
    std::vector<double> first_lags(std::size_t n) const;

private:
    double hurst_;
};

double rho(const CorrelationFn& c, long long lag);

/// Covariance of fractional Brownian motion, (|t|^{2H} + |s|^{2H} - |t-s|^{2H}) / 2.
double fbm_covariance(double hurst, double s, double t);

enum class SamplerTag { circulant, cholesky };

std::string_view to_string(SamplerTag tag);

struct GaussianPath {
    std::vector<double> values;  ///< X_1, ..., X_N
    double hurst = 0.5;
    std::uint64_t seed = 0;
    SamplerTag sampler = SamplerTag::circulant;

    std::size_t size() const noexcept { return values.size(); }
};

struct SamplerOptions {
    /// Circulant eigenvalues below -eig_tolerance * max eigenvalue reject the embedding.
    double eig_tolerance = 1e-9;
    bool force_cholesky = false;
};

/// Exact sampler for a stationary unit-variance Gaussian sequence given its
/// autocorrelation rho(0..n-1). Circulant embedding into the next power of
/// two m >= max(2, 2(n-1)), eigenvalues by FFT of the first row, synthesis
/// from W = Z1 + i Z2 (drawn interleaved: Z1_0, Z2_0, Z1_1, ...), path = Re
/// FFT(sqrt(lambda/m) W). Falls back to Cholesky of the Toeplitz matrix when
/// the embedding is not nonnegative; `tag` reports which one ran.
std::vector<double> sample_stationary(std::span<const double> autocorrelation, std::uint64_t seed,
                                      const SamplerOptions& options = {}, SamplerTag* tag = nullptr);

/// Fractional Gaussian noise X_k = B_{k+1} - B_k, k = 1..n. Deterministic in (H, n, seed).
/// The circulant row uses the exact fGn correlation up to lag m/2, so the
/// embedding is nonnegative for every H; sample_stationary pads with zeros.
GaussianPath sample_fgn(double hurst, std::size_t n, std::uint64_t seed, const SamplerOptions& options = {});

/// n i.i.d. standard normals from NormalStream(seed).
std::vector<double> iid_normals(std::size_t n, std::uint64_t seed);

inline constexpr std::size_t kToeplitzEigenBudget = 4096;

/// Eigenvalues of the symmetric Toeplitz matrix with first column `column`,
/// sorted descending. Even sizes use the centro-symmetric split into two
/// half-size problems.
std::vector<double> symmetric_toeplitz_eigenvalues(std::span<const double> column);

/// Eigenvalues of the n x n fGn correlation matrix, sorted descending.
/// Throws ErrorKind::budget when n > budget.
std::vector<double> toeplitz_eigen(double hurst, std::size_t n, std::size_t budget = kToeplitzEigenBudget);

/// CSV export: a "# H=...,n=...,seed=...,sampler_tag=..." comment line, a
/// header line "X", then one value per line.
void write_path_csv(std::ostream& out, const GaussianPath& path);

}  // namespace aslt
