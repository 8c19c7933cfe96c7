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

#include "aslt/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aslt/error.hpp"
#include "aslt/hermite.hpp"
#include "aslt/rng.hpp"
#include "quadrature.hpp"

namespace aslt {

namespace {

constexpr std::size_t kTensorSeriesBudget = 256;
constexpr std::size_t kCovarianceBudget = 64;

std::vector<std::size_t> normalize_checkpoints(std::vector<std::size_t> c, std::size_t n_max) {
    if (c.empty()) c = dyadic_checkpoints(n_max);
    std::erase_if(c, [&](std::size_t v) { return v < 2 || v > n_max; });
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.empty() || c.back() != n_max) c.push_back(n_max);
    return c;
}

nlohmann::json family_json(const KernelFamily& f) {
    nlohmann::json j = {{"family", f.name()}, {"q", f.order()}};
    if (f.kind == KernelFamily::Kind::fgn) j["hurst"] = f.hurst;
    return j;
}

double log_weight(std::size_t n, int power) {
    const double nn = static_cast<double>(n);
    return 1.0 / (nn * std::pow(std::log(nn), power));
}

// ||g_k (x)_r g_k|| for one k.
double self_contraction_norm(const KernelFamily& family, int r, std::size_t k) {
    if (family.kind == KernelFamily::Kind::fgn) {
        if (family.hurst == 0.5) {
            // rho is the Kronecker delta: only i = j = i' = j' survives
            const double pref = std::pow(static_cast<double>(k), 2.0 * (family.q * 0.5 - 1.0));
            return pref * std::sqrt(static_cast<double>(k));
        }
        return std::sqrt(std::max(0.0, fgn_contraction_inner_product(family.q, family.hurst, r, k, k)));
    }
    const auto g = make_kernel(family, k);
    return norm(contract(g, g, static_cast<std::size_t>(r)));
}

}  // namespace

ConditionReport condition_a1(const KernelFamily& family, int r, std::size_t n_max,
                             std::vector<std::size_t> checkpoints) {
    const int q = family.order();
    if (r < 1 || r > q - 1) throw Error(ErrorKind::domain, "A1 needs 1 <= r <= q-1");
    if (n_max < 2) throw Error(ErrorKind::domain, "A1 needs N >= 2");
    if (family.kind != KernelFamily::Kind::fgn && n_max > kTensorSeriesBudget)
        throw Error(ErrorKind::budget, "A1 via the tensor oracle is limited to N <= " +
                                           std::to_string(kTensorSeriesBudget));
    checkpoints = normalize_checkpoints(std::move(checkpoints), n_max);
    ConditionReport rep;
    rep.id = ConditionId::A1;
    rep.estimator = Estimator::exact;
    rep.parameters = family_json(family);
    rep.parameters["r"] = r;
    rep.parameters["N"] = n_max;
    rep.normalizer = "none";
    rep.policy = "exact at every n";
    Trajectory tr;
    double inner = 0.0;
    double partial = 0.0;
    std::size_t ci = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        inner += self_contraction_norm(family, r, n) / static_cast<double>(n);
        if (n < 2) continue;
        partial += log_weight(n, 2) * inner;
        if (ci < checkpoints.size() && checkpoints[ci] == n) {
            tr.points.push_back({n, partial, std::nullopt, inner, std::nullopt});
            ++ci;
        }
    }
    rep.trajectories.push_back(std::move(tr));
    return rep;
}

ConditionReport condition_a2(const KernelFamily& family, std::size_t n_max, bool normalized,
                             std::vector<std::size_t> checkpoints) {
    if (n_max < 2) throw Error(ErrorKind::domain, "A2 needs N >= 2");
    const bool fgn = family.kind == KernelFamily::Kind::fgn;
    if (!fgn && n_max > 4 * kTensorSeriesBudget)
        throw Error(ErrorKind::budget, "A2 via the tensor oracle is limited to N <= " +
                                           std::to_string(4 * kTensorSeriesBudget));
    checkpoints = normalize_checkpoints(std::move(checkpoints), n_max);
    const int q = family.order();
    const double qf = factorial(q);

    // <g_k, g_n> for k <= n, one row per new n.
    std::vector<double> diag(n_max + 1, 0.0);
    std::vector<double> row(n_max + 1, 0.0);
    std::vector<double> lag_prefix;  // fgn: P[d + n_max] = sum_{-n_max <= e <= d} rho(e)^q
    std::vector<SparseSymmetricKernel> kernels;
    if (fgn) {
        const CorrelationFn corr(family.hurst);
        lag_prefix.resize(2 * n_max + 1);
        double acc = 0.0;
        for (std::size_t i = 0; i < lag_prefix.size(); ++i) {
            acc += std::pow(corr(static_cast<long long>(i) - static_cast<long long>(n_max)), q);
            lag_prefix[i] = acc;
        }
    }
    auto prefix_at = [&](long long d) {
        const long long i = d + static_cast<long long>(n_max);
        return i < 0 ? 0.0 : lag_prefix[static_cast<std::size_t>(i)];
    };
    const double expo = fgn ? q * (1.0 - family.hurst) - 1.0 : 0.0;

    ConditionReport rep;
    rep.id = ConditionId::A2;
    rep.estimator = Estimator::exact;
    rep.parameters = family_json(family);
    rep.parameters["N"] = n_max;
    rep.parameters["normalized"] = normalized;
    rep.normalizer = "none";
    rep.policy = "exact at every n; one new row of pairs per n";
    Trajectory tr;
    double inner = 0.0;
    double partial = 0.0;
    std::size_t ci = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto nl = static_cast<long long>(n);
        if (fgn) {
            // F(k, n) = F(k-1, n) + sum_{j<=n} rho(k-j)^q
            double f = 0.0;
            for (std::size_t k = 1; k <= n; ++k) {
                const auto kl = static_cast<long long>(k);
                f += prefix_at(kl - 1) - prefix_at(kl - 1 - nl);
                row[k] = std::pow(static_cast<double>(k) * static_cast<double>(n), expo) * f;
            }
        } else {
            kernels.push_back(make_kernel(family, n));
            for (std::size_t k = 1; k <= n; ++k) row[k] = inner_product(kernels[k - 1], kernels[n - 1]);
        }
        diag[n] = row[n];
        double add = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            double e = qf * row[k];
            if (normalized) e /= qf * std::sqrt(diag[k] * diag[n]);
            add += (k == n ? 1.0 : 2.0) * std::abs(e) / (static_cast<double>(k) * static_cast<double>(n));
        }
        inner += add;
        if (n < 2) continue;
        partial += log_weight(n, 3) * inner;
        if (ci < checkpoints.size() && checkpoints[ci] == n) {
            tr.points.push_back({n, partial, std::nullopt, inner, std::nullopt});
            ++ci;
        }
    }
    rep.trajectories.push_back(std::move(tr));
    return rep;
}

ConditionReport condition_b1(int q, double hurst, const ReferenceDistribution& ref, std::span<const double> t_grid,
                             std::size_t n_max, const PhiSource& source, SeriesKind which,
                             std::vector<std::size_t> checkpoints) {
    if (n_max < 2) throw Error(ErrorKind::domain, "B1 needs N >= 2");
    if (t_grid.empty()) throw Error(ErrorKind::domain, "B1 needs a nonempty t grid");
    const bool exact = source.kind == PhiSource::Kind::exact_q2;
    if (exact && q != 2) throw Error(ErrorKind::domain, "the exact characteristic function source requires q = 2");
    if (!exact && source.replicates < 1000)
        throw Error(ErrorKind::domain, "the Monte Carlo source requires at least 1000 replicates");
    checkpoints = normalize_checkpoints(std::move(checkpoints), n_max);
    const std::size_t nt = t_grid.size();

    // phi[k-1][ti]; exact source fills evaluated k only and holds in between
    std::vector<std::vector<std::complex<double>>> phi(n_max, std::vector<std::complex<double>>(nt));
    std::vector<std::size_t> evaluated;
    if (exact) {
        for (std::size_t k = 1; k <= n_max; ++k) {
            const bool dyadic = (k & (k - 1)) == 0;
            if (k <= source.exact_every_k_up_to || dyadic || k == n_max) evaluated.push_back(k);
        }
        std::size_t e = 0;
        for (std::size_t k = 1; k <= n_max; ++k) {
            if (e < evaluated.size() && evaluated[e] == k) {
                const ExactQ2Law law(hurst, k, which, source.eigen_budget);
                for (std::size_t ti = 0; ti < nt; ++ti) phi[k - 1][ti] = law.charfn(t_grid[ti]);
                ++e;
            } else {
                phi[k - 1] = phi[k - 2];
            }
        }
    } else {
        const SeriesSpec spec{KernelFamily::fgn(q, hurst), n_max, which};
        const auto reps = simulate_replicates(spec, source.replicates, source.seed, source.threads);
        for (const auto& rseries : reps) {
            for (std::size_t k = 0; k < n_max; ++k) {
                for (std::size_t ti = 0; ti < nt; ++ti) {
                    const double a = t_grid[ti] * rseries[k];
                    phi[k][ti] += std::complex<double>(std::cos(a), std::sin(a));
                }
            }
        }
        const double m = static_cast<double>(source.replicates);
        for (auto& rowv : phi)
            for (auto& v : rowv) v /= m;
    }

    ConditionReport rep;
    rep.id = ConditionId::B1;
    rep.estimator = exact ? Estimator::exact : Estimator::monte_carlo;
    rep.parameters = {{"q", q}, {"hurst", hurst}, {"N", n_max}, {"t_points", nt}, {"reference", ref.kind_name()},
                      {"which", which == SeriesKind::G ? "G" : "G_hat"}};
    if (exact) {
        rep.parameters["exact_every_k_up_to"] = source.exact_every_k_up_to;
        rep.policy = "phi_k exact at every k <= " + std::to_string(source.exact_every_k_up_to) +
                     ", dyadic k beyond, held constant between evaluations";
    } else {
        rep.parameters["replicates"] = source.replicates;
        rep.parameters["seed"] = source.seed;
        rep.policy = "phi_k replicate-averaged at every k";
    }
    rep.normalizer = "none";
    for (std::size_t ti = 0; ti < nt; ++ti) {
        const double t = t_grid[ti];
        const std::complex<double> ref_phi = ref.charfn(t);
        Trajectory tr;
        tr.t = t;
        std::complex<double> s = 0.0;
        double partial = 0.0;
        std::size_t ci = 0;
        for (std::size_t n = 1; n <= n_max; ++n) {
            // t = 0 contributes exactly zero
            if (t != 0.0) s += (phi[n - 1][ti] - ref_phi) / static_cast<double>(n);
            if (n < 2) continue;
            const double sq = std::norm(s);
            partial += log_weight(n, 3) * sq;
            if (ci < checkpoints.size() && checkpoints[ci] == n) {
                tr.points.push_back({n, partial, std::nullopt, sq, std::nullopt});
                ++ci;
            }
        }
        rep.trajectories.push_back(std::move(tr));
    }
    for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
        std::size_t best = 0;
        for (std::size_t ti = 1; ti < nt; ++ti)
            if (rep.trajectories[ti].points[ci].value > rep.trajectories[best].points[ci].value) best = ti;
        ReportPoint p = rep.trajectories[best].points[ci];
        p.summand.reset();
        rep.sup_over_grid.push_back(p);
    }
    return rep;
}

ConditionReport condition_b2(const std::vector<std::vector<double>>& replicates, std::size_t n_max,
                             std::vector<std::size_t> checkpoints) {
    if (replicates.size() < 8) throw Error(ErrorKind::domain, "B2 needs at least 8 replicates");
    if (n_max < 2) throw Error(ErrorKind::domain, "B2 needs N >= 2");
    for (const auto& r : replicates)
        if (r.size() < n_max) throw Error(ErrorKind::domain, "replicate shorter than N");
    checkpoints = normalize_checkpoints(std::move(checkpoints), n_max);
    if (checkpoints.front() != 2) checkpoints.insert(checkpoints.begin(), 2);
    const std::size_t m = replicates.size();
    const std::size_t nc = checkpoints.size();

    // y[c][r] = sum_{k <= c} G_k^2 / k for replicate r
    std::vector<std::vector<double>> y(nc, std::vector<double>(m));
    for (std::size_t r = 0; r < m; ++r) {
        double acc = 0.0;
        std::size_t ci = 0;
        for (std::size_t k = 1; k <= n_max && ci < nc; ++k) {
            acc += replicates[r][k - 1] * replicates[r][k - 1] / static_cast<double>(k);
            if (checkpoints[ci] == k) y[ci++][r] = acc;
        }
    }
    // block weight: sum of 1/(n log^3 n) for n in [c_i, c_{i+1})
    std::vector<double> block(nc, 0.0);
    for (std::size_t ci = 0; ci < nc; ++ci) {
        const std::size_t end = ci + 1 < nc ? checkpoints[ci + 1] : n_max + 1;
        for (std::size_t n = checkpoints[ci]; n < end; ++n) block[ci] += log_weight(n, 3);
    }

    auto variance_without = [&](const std::vector<double>& v, double sum, double sumsq, std::size_t skip) {
        double s = sum, s2 = sumsq;
        double count = static_cast<double>(m);
        if (skip < m) {
            s -= v[skip];
            s2 -= v[skip] * v[skip];
            count -= 1.0;
        }
        const double mean = s / count;
        return std::max(0.0, (s2 - count * mean * mean) / (count - 1.0));
    };

    std::vector<double> var(nc), sum(nc), sumsq(nc);
    for (std::size_t ci = 0; ci < nc; ++ci) {
        // centre before squaring to keep the variance accurate
        double mean = 0.0;
        for (double v : y[ci]) mean += v;
        mean /= static_cast<double>(m);
        for (auto& v : y[ci]) v -= mean;
        for (double v : y[ci]) {
            sum[ci] += v;
            sumsq[ci] += v * v;
        }
        var[ci] = variance_without(y[ci], sum[ci], sumsq[ci], m);
    }
    // partial sum through checkpoint c_i: full earlier blocks plus the n = c_i term
    auto recorded = [&](auto&& variance_at) {
        std::vector<double> out(nc);
        double before = 0.0;
        for (std::size_t ci = 0; ci < nc; ++ci) {
            const double v = variance_at(ci);
            out[ci] = before + log_weight(checkpoints[ci], 3) * v;
            before += block[ci] * v;
        }
        return out;
    };
    const auto value = recorded([&](std::size_t ci) { return var[ci]; });
    std::vector<std::vector<double>> loo(m);
    for (std::size_t r = 0; r < m; ++r)
        loo[r] = recorded([&](std::size_t ci) { return variance_without(y[ci], sum[ci], sumsq[ci], r); });

    ConditionReport rep;
    rep.id = ConditionId::B2;
    rep.estimator = Estimator::monte_carlo;
    rep.parameters = {{"replicates", m}, {"N", n_max}};
    rep.normalizer = "none";
    rep.policy = "variance at dyadic checkpoints, held until the next checkpoint; jackknife stderr";
    Trajectory tr;
    const double md = static_cast<double>(m);
    for (std::size_t ci = 0; ci < nc; ++ci) {
        double mean_loo = 0.0;
        for (std::size_t r = 0; r < m; ++r) mean_loo += loo[r][ci];
        mean_loo /= md;
        double ss = 0.0;
        for (std::size_t r = 0; r < m; ++r) ss += (loo[r][ci] - mean_loo) * (loo[r][ci] - mean_loo);
        tr.points.push_back({checkpoints[ci], value[ci], std::sqrt(ss * (md - 1.0) / md), var[ci], std::nullopt});
    }
    rep.trajectories.push_back(std::move(tr));
    return rep;
}

CovarianceTerms covariance_g2_terms(const KernelFamily& family, std::size_t k, std::size_t l) {
    if (!family.orthonormal()) {
        throw Error(ErrorKind::domain, "exact Cov(G_k^2, G_l^2) needs an orthonormal family; "
                                       "estimate it from replicates with condition_b2 instead");
    }
    if (k == 0 || l == 0) throw Error(ErrorKind::domain, "kernel indices must be >= 1");
    if (k > kCovarianceBudget || l > kCovarianceBudget)
        throw Error(ErrorKind::budget, "exact covariance limited to k, l <= " + std::to_string(kCovarianceBudget));
    const int q = family.order();
    const double qf = factorial(q);
    auto gk = make_kernel(family, k);
    auto gl = make_kernel(family, l);
    gk.scale(1.0 / std::sqrt(qf * inner_product(gk, gk)));
    gl.scale(1.0 / std::sqrt(qf * inner_product(gl, gl)));
    CovarianceTerms out;
    out.correlation = qf * inner_product(gk, gl);
    out.mean_term = 2.0 * out.correlation * out.correlation;
    out.covariance = out.mean_term;
    const Tensor tk = gk.to_tensor();
    const Tensor tl = gl.to_tensor();
    for (int r = 1; r <= q - 1; ++r) {
        const Tensor c = contract(tk, tl, static_cast<std::size_t>(r));
        const double bin = static_cast<double>(binomial(q, r));
        const double plain = qf * qf * bin * bin * inner_product(c, c);
        const SparseSymmetricKernel s = symmetrize(c);
        const double rf = factorial(r);
        const double sym = rf * rf * bin * bin * bin * bin * factorial(2 * q - 2 * r) * inner_product(s, s);
        out.contraction_terms.push_back(plain);
        out.symmetrized_terms.push_back(sym);
        out.covariance += plain + sym;
    }
    return out;
}

double covariance_g2(const KernelFamily& family, std::size_t k, std::size_t l) {
    return covariance_g2_terms(family, k, l).covariance;
}

double fourth_moment_gap(const KernelFamily& family, std::size_t n) { return covariance_g2(family, n, n) - 2.0; }

// Exact q = 2 law -------------------------------------------------------------

ExactQ2Law::ExactQ2Law(double hurst, std::size_t n, SeriesKind which, std::size_t eigen_budget)
    : lambda_(toeplitz_eigen(hurst, n, eigen_budget)) {
    double s2 = 0.0;
    for (double l : lambda_) s2 += l * l;
    sigma_ = which == SeriesKind::G ? std::sqrt(2.0 * s2) : std::pow(static_cast<double>(n), 2.0 * hurst - 1.0);
}

std::complex<double> ExactQ2Law::charfn(double t) const {
    const double s = t / sigma_;
    std::complex<double> log_phi = 0.0;
    for (double l : lambda_) log_phi += -0.5 * std::log(std::complex<double>(1.0, -2.0 * s * l)) -
                                        std::complex<double>(0.0, s * l);
    return std::exp(log_phi);
}

double ExactQ2Law::variance() const {
    double s2 = 0.0;
    for (double l : lambda_) s2 += l * l;
    return 2.0 * s2 / (sigma_ * sigma_);
}

double ExactQ2Law::skewness() const {
    double s2 = 0.0, s3 = 0.0;
    for (double l : lambda_) {
        s2 += l * l;
        s3 += l * l * l;
    }
    return 8.0 * s3 / std::pow(2.0 * s2, 1.5);
}

double ExactQ2Law::excess_kurtosis() const {
    double s2 = 0.0, s4 = 0.0;
    for (double l : lambda_) {
        s2 += l * l;
        s4 += l * l * l * l;
    }
    return 48.0 * s4 / (4.0 * s2 * s2);
}

std::vector<double> ExactQ2Law::quantiles(std::span<const double> probabilities) const {
    for (double p : probabilities)
        if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::domain, "quantile probabilities must lie in (0, 1)");
    // Gil-Pelaez: F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-itx} phi(t)) / t dt, on panels up to |phi| < 1e-12
    double t_max = 8.0;
    while (std::abs(charfn(t_max)) > 1e-12 && t_max < 8192.0) t_max *= 2.0;
    const auto& gl = detail::gauss_legendre16();
    constexpr double width = 0.25;
    std::vector<double> nodes, weights;
    std::vector<std::complex<double>> values;
    for (double a = 0.0; a < t_max; a += width) {
        for (int i = 0; i < 16; ++i) {
            const double t = a + 0.5 * width * (1.0 + gl.x[i]);
            nodes.push_back(t);
            weights.push_back(0.5 * width * gl.w[i] / t);
            values.push_back(charfn(t));
        }
    }
    auto cdf = [&](double x) {
        double s = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double a = nodes[j] * x;
            s += weights[j] * (values[j].imag() * std::cos(a) - values[j].real() * std::sin(a));
        }
        return std::clamp(0.5 - s / std::numbers::pi, 0.0, 1.0);
    };
    const double sd = std::sqrt(variance());
    const double support_lo = -static_cast<double>(lambda_.size()) / sigma_;
    const double lo = std::max(support_lo, -10.0 * sd);
    const double hi = 40.0 * sd;
    constexpr std::size_t grid = 8192;
    std::vector<double> xs(grid), fs(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
        fs[i] = cdf(xs[i]);
        if (i > 0) fs[i] = std::max(fs[i], fs[i - 1]);
    }
    std::vector<double> out;
    out.reserve(probabilities.size());
    for (double p : probabilities) {
        const auto it = std::lower_bound(fs.begin(), fs.end(), p);
        if (it == fs.begin()) {
            out.push_back(xs.front());
            continue;
        }
        if (it == fs.end()) {
            out.push_back(xs.back());
            continue;
        }
        const std::size_t j = static_cast<std::size_t>(it - fs.begin());
        // linear interpolation inside the bracketing cell
        const double f0 = fs[j - 1], f1 = fs[j];
        const double w = f1 > f0 ? (p - f0) / (f1 - f0) : 0.5;
        out.push_back(xs[j - 1] + w * (xs[j] - xs[j - 1]));
    }
    return out;
}

std::complex<double> charfn_exact_q2(double hurst, std::size_t n, double t, SeriesKind which) {
    return ExactQ2Law(hurst, n, which).charfn(t);
}

CharfnEstimate empirical_charfn(std::span<const double> samples, double t) {
    if (samples.size() < 2) throw Error(ErrorKind::domain, "empirical characteristic function needs >= 2 samples");
    double c = 0.0, s = 0.0, c2 = 0.0, s2 = 0.0;
    for (double x : samples) {
        const double a = std::cos(t * x), b = std::sin(t * x);
        c += a;
        s += b;
        c2 += a * a;
        s2 += b * b;
    }
    const double m = static_cast<double>(samples.size());
    CharfnEstimate e;
    e.mean = {c / m, s / m};
    e.stderr_re = std::sqrt(std::max(0.0, (c2 - m * (c / m) * (c / m)) / (m - 1.0)) / m);
    e.stderr_im = std::sqrt(std::max(0.0, (s2 - m * (s / m) * (s / m)) / (m - 1.0)) / m);
    return e;
}

double covariance_bound_ratio(std::span<const double> gk, std::span<const double> gl, double cov_sq,
                              std::span<const double> t_grid) {
    if (gk.size() != gl.size() || gk.size() < 2) throw Error(ErrorKind::domain, "paired samples of equal size needed");
    if (!(cov_sq > 0.0)) throw Error(ErrorKind::domain, "covariance of squares must be positive");
    std::vector<double> diff(gk.size());
    for (std::size_t i = 0; i < gk.size(); ++i) diff[i] = gk[i] - gl[i];
    double best = 0.0;
    for (double t : t_grid) {
        if (t == 0.0) continue;
        const auto joint = empirical_charfn(diff, t).mean;
        const auto a = empirical_charfn(gk, t).mean;
        const auto b = std::conj(empirical_charfn(gl, t).mean);
        best = std::max(best, std::abs(joint - a * b) / (std::abs(t) * cov_sq));
    }
    return best;
}

}  // namespace aslt
