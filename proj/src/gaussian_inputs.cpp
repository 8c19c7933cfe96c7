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

#include "aslt/gaussian_inputs.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "aslt/error.hpp"
#include "aslt/io.hpp"
#include "aslt/rng.hpp"
#include "fft.hpp"

namespace aslt {
namespace {

void check_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw Error(ErrorKind::domain, "Hurst index must lie in (0, 1), got " + format_double(hurst));
}

// Second difference of |x|^{2H} at integer a, expanded as
// a^{2H} sum_{m>=1} C(2H, 2m) a^{-2m} for |a| >= 8 to avoid cancellation.
double fgn_correlation(double hurst, long long lag) {
    const double alpha = 2.0 * hurst;
    const double a = std::abs(static_cast<double>(lag));
    if (a < 8.0) {
        return 0.5 * (std::pow(a + 1.0, alpha) + std::pow(std::abs(a - 1.0), alpha) - 2.0 * std::pow(a, alpha));
    }
    const double inv2 = 1.0 / (a * a);
    double coeff = 1.0;  // C(alpha, j), advanced two steps per term
    double power = 1.0;
    double sum = 0.0;
    for (int m = 1; m <= 60; ++m) {
        const int j = 2 * m;
        coeff *= (alpha - (j - 2)) / (j - 1);
        coeff *= (alpha - (j - 1)) / j;
        power *= inv2;
        const double term = coeff * power;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return std::pow(a, alpha) * sum;
}

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

std::vector<double> cholesky_sample(std::span<const double> acf, std::uint64_t seed) {
    const std::size_t n = acf.size();
    std::vector<double> L(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = acf[0];
        for (std::size_t k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k];
        if (!(d > 0.0)) {
            throw Error(ErrorKind::numeric, "correlation matrix is not numerically positive definite: leading minor " +
                                                std::to_string(j + 1) + " has pivot " + format_double(d));
        }
        const double ljj = std::sqrt(d);
        L[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = acf[i - j];
            for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
            L[i * n + j] = s / ljj;
        }
    }
    NormalStream normal(seed);
    std::vector<double> z(n);
    for (auto& v : z) v = normal();
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) s += L[i * n + k] * z[k];
        x[i] = s;
    }
    return x;
}

std::vector<double> sorted_descending(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

CorrelationFn::CorrelationFn(double hurst) : hurst_(hurst) { check_hurst(hurst); }

double CorrelationFn::operator()(long long lag) const noexcept { return fgn_correlation(hurst_, lag); }

std::vector<double> CorrelationFn::first_lags(std::size_t n) const {
    std::vector<double> out(n);
    for (std::size_t a = 0; a < n; ++a) out[a] = (*this)(static_cast<long long>(a));
    return out;
}

double rho(const CorrelationFn& c, long long lag) { return c(lag); }

double fbm_covariance(double hurst, double s, double t) {
    check_hurst(hurst);
    const double alpha = 2.0 * hurst;
    return 0.5 * (std::pow(std::abs(t), alpha) + std::pow(std::abs(s), alpha) - std::pow(std::abs(t - s), alpha));
}

std::string_view to_string(SamplerTag tag) { return tag == SamplerTag::circulant ? "circulant" : "cholesky"; }

namespace {

std::size_t embedding_size(std::size_t n) { return std::max<std::size_t>(2, next_pow2(2 * (n - 1))); }

// `lags` holds rho(0..L-1) with L >= n; lags beyond L are taken as zero in the circulant row.
std::vector<double> sample_embedded(std::span<const double> lags, std::size_t n, std::uint64_t seed,
                                    const SamplerOptions& options, SamplerTag* tag) {
    if (n == 0) throw Error(ErrorKind::domain, "path length must be >= 1");
    if (!options.force_cholesky) {
        const std::size_t m = embedding_size(n);
        // First row of the circulant: acf continued by symmetry around m/2.
        std::vector<std::complex<double>> row(m);
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t lag = std::min(j, m - j);
            row[j] = lag < lags.size() ? lags[lag] : 0.0;
        }
        detail::fft_forward(row);
        double lmax = 0.0;
        for (const auto& v : row) lmax = std::max(lmax, v.real());
        bool ok = lmax > 0.0;
        for (const auto& v : row) ok = ok && v.real() >= -options.eig_tolerance * lmax;
        if (ok) {
            NormalStream normal(seed);
            std::vector<std::complex<double>> w(m);
            for (std::size_t j = 0; j < m; ++j) {
                const double z1 = normal();
                const double z2 = normal();
                const double amp = std::sqrt(std::max(0.0, row[j].real()) / static_cast<double>(m));
                w[j] = {amp * z1, amp * z2};
            }
            detail::fft_forward(w);
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = w[i].real();
            if (tag) *tag = SamplerTag::circulant;
            return x;
        }
    }
    if (tag) *tag = SamplerTag::cholesky;
    return cholesky_sample(lags.first(n), seed);
}

}  // namespace

std::vector<double> sample_stationary(std::span<const double> acf, std::uint64_t seed, const SamplerOptions& options,
                                      SamplerTag* tag) {
    return sample_embedded(acf, acf.size(), seed, options, tag);
}

GaussianPath sample_fgn(double hurst, std::size_t n, std::uint64_t seed, const SamplerOptions& options) {
    const CorrelationFn corr(hurst);
    if (n == 0) throw Error(ErrorKind::domain, "path length must be >= 1");
    // the embedding needs rho up to lag m/2; the true fGn lags keep it nonnegative for every H
    const auto lags = corr.first_lags(std::max(n, embedding_size(n) / 2 + 1));
    GaussianPath path;
    path.hurst = hurst;
    path.seed = seed;
    path.values = sample_embedded(lags, n, seed, options, &path.sampler);
    return path;
}

std::vector<double> iid_normals(std::size_t n, std::uint64_t seed) {
    NormalStream normal(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = normal();
    return out;
}

std::vector<double> symmetric_toeplitz_eigenvalues(std::span<const double> c) {
    const std::size_t n = c.size();
    if (n == 0) return {};
    using Solver = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>;
    std::vector<double> out;
    out.reserve(n);
    if (n % 2 == 1 || n < 4) {
        Eigen::MatrixXd t(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) t(i, j) = c[i > j ? i - j : j - i];
        Solver s(t, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < s.eigenvalues().size(); ++i) out.push_back(s.eigenvalues()(i));
        return sorted_descending(std::move(out));
    }
    // Persymmetric split: eig(T) = eig(A + BJ) u eig(A - BJ), where
    // (A +- BJ)_{ij} = c_{|i-j|} +- c_{2m-1-i-j}.
    const std::size_t m = n / 2;
    Eigen::MatrixXd plus(m, m);
    Eigen::MatrixXd minus(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double toe = c[i > j ? i - j : j - i];
            const double hank = c[2 * m - 1 - i - j];
            plus(i, j) = toe + hank;
            minus(i, j) = toe - hank;
        }
    }
    for (auto* mat : {&plus, &minus}) {
        Solver s(*mat, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < s.eigenvalues().size(); ++i) out.push_back(s.eigenvalues()(i));
    }
    return sorted_descending(std::move(out));
}

std::vector<double> toeplitz_eigen(double hurst, std::size_t n, std::size_t budget) {
    const CorrelationFn corr(hurst);
    if (n == 0) throw Error(ErrorKind::domain, "matrix size must be >= 1");
    if (n > budget) {
        throw Error(ErrorKind::budget, "toeplitz_eigen: n = " + std::to_string(n) + " exceeds the dense budget " +
                                           std::to_string(budget) + "; use Monte Carlo paths instead");
    }
    return symmetric_toeplitz_eigenvalues(corr.first_lags(n));
}

void write_path_csv(std::ostream& out, const GaussianPath& path) {
    out << "# H=" << format_double(path.hurst) << ",n=" << path.size() << ",seed=" << path.seed
        << ",sampler_tag=" << to_string(path.sampler) << "\n";
    out << "X\n";
    for (double v : path.values) out << format_double(v) << "\n";
}

}  // namespace aslt
