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

#include "aslt/chaos_stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "aslt/error.hpp"
#include "aslt/io.hpp"
#include "aslt/parallel.hpp"
#include "aslt/rng.hpp"

namespace aslt {

VariationSeries variation_series(const GaussianPath& path, ChaosOrder q) {
    return variation_series(path.values, q, path.hurst);
}

VariationSeries variation_series(std::span<const double> x, ChaosOrder q, double hurst) {
    VariationSeries s;
    s.q = q;
    s.hurst = hurst;
    const std::size_t n = x.size();
    s.V.resize(n);
    s.G.resize(n);
    s.G_hat.resize(n);
    s.var_exact = variance_Vn_prefix(q, hurst, n);
    const double expo = q * (1.0 - hurst) - 1.0;
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        v += hermite_eval(q, x[k]);
        s.V[k] = v;
        s.G[k] = v / std::sqrt(s.var_exact[k]);
        s.G_hat[k] = std::pow(static_cast<double>(k + 1), expo) * v;
    }
    return s;
}

double variance_Vn(ChaosOrder q, double hurst, std::size_t n) {
    if (n == 0) return 0.0;
    const CorrelationFn corr(hurst);
    double s = 0.0;
    for (std::size_t a = n - 1; a >= 1; --a)
        s += static_cast<double>(n - a) * std::pow(corr(static_cast<long long>(a)), q.value());
    return factorial(q) * (static_cast<double>(n) + 2.0 * s);
}

std::vector<double> variance_Vn_prefix(ChaosOrder q, double hurst, std::size_t n_max) {
    const CorrelationFn corr(hurst);
    const double qf = factorial(q);
    std::vector<double> out(n_max);
    double lag_sum = 0.0;  // sum_{1<=a<n} rho(a)^q
    double var = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n > 1) lag_sum += std::pow(corr(static_cast<long long>(n - 1)), q.value());
        var += qf * (1.0 + 2.0 * lag_sum);
        out[n - 1] = var;
    }
    return out;
}

std::vector<double> product_series(std::span<const double> iid, bool reversed) {
    if (iid.size() < 2) throw Error(ErrorKind::domain, "product series needs X_0..X_N with N >= 1");
    const std::size_t n_max = iid.size() - 1;
    std::vector<double> out(n_max);
    double chi = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
        if (reversed) {
            chi += iid[n] * iid[n] - 1.0;
            out[n - 1] = iid[0] * scale * chi;
        } else {
            chi += iid[n - 1] * iid[n - 1] - 1.0;
            out[n - 1] = iid[n] * scale * chi;
        }
    }
    return out;
}

std::string_view to_string(Normalization n) { return n == Normalization::log ? "log" : "harmonic"; }

// Log-average measures -------------------------------------------------------

LogAverageMeasure::LogAverageMeasure(std::vector<double> atoms) : atoms_(std::move(atoms)) {
    std::vector<std::pair<double, double>> weighted(atoms_.size());
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        if (!std::isfinite(atoms_[k])) throw Error(ErrorKind::numeric, "non-finite atom in log-average measure");
        weighted[k] = {atoms_[k], 1.0 / static_cast<double>(k + 1)};
        harmonic_ += weighted[k].second;
    }
    std::sort(weighted.begin(), weighted.end());
    double acc = 0.0;
    for (const auto& [x, w] : weighted) {
        acc += w;
        if (!sorted_values_.empty() && sorted_values_.back() == x) {
            cumulative_.back() = acc;
        } else {
            sorted_values_.push_back(x);
            cumulative_.push_back(acc);
        }
    }
}

LogAverageMeasure LogAverageMeasure::prefix(std::span<const double> series, std::size_t n) {
    if (n > series.size()) throw Error(ErrorKind::domain, "prefix longer than the series");
    return LogAverageMeasure(std::vector<double>(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(n)));
}

double LogAverageMeasure::normalizer(Normalization norm) const {
    if (atoms_.empty()) throw Error(ErrorKind::domain, "empty log-average measure");
    if (norm == Normalization::harmonic) return harmonic_;
    if (atoms_.size() < 2) throw Error(ErrorKind::domain, "log normalizer needs n >= 2");
    return std::log(static_cast<double>(atoms_.size()));
}

double LogAverageMeasure::cdf(double x, Normalization norm) const {
    const auto it = std::upper_bound(sorted_values_.begin(), sorted_values_.end(), x);
    if (it == sorted_values_.begin()) return 0.0;
    const double raw = cumulative_[static_cast<std::size_t>(it - sorted_values_.begin()) - 1];
    const double v = raw / normalizer(norm);
    return norm == Normalization::harmonic ? std::min(v, 1.0) : v;
}

double LogAverageMeasure::cdf_left(double x, Normalization norm) const {
    const auto it = std::lower_bound(sorted_values_.begin(), sorted_values_.end(), x);
    if (it == sorted_values_.begin()) return 0.0;
    const double raw = cumulative_[static_cast<std::size_t>(it - sorted_values_.begin()) - 1];
    const double v = raw / normalizer(norm);
    return norm == Normalization::harmonic ? std::min(v, 1.0) : v;
}

std::complex<double> LogAverageMeasure::charfn(double t, Normalization norm) const {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        const double w = 1.0 / static_cast<double>(k + 1);
        re += w * std::cos(t * atoms_[k]);
        im += w * std::sin(t * atoms_[k]);
    }
    const double z = normalizer(norm);
    return {re / z, im / z};
}

double log_average_cdf(const LogAverageMeasure& m, double x, Normalization norm) { return m.cdf(x, norm); }

double ks_distance(const LogAverageMeasure& m, const ReferenceDistribution& ref) {
    const auto& xs = m.sorted_values();
    const auto& cum = m.cumulative_weight();
    const double z = m.normalizer(Normalization::harmonic);
    double sup = 0.0;
    double below = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double here = std::min(cum[i] / z, 1.0);
        sup = std::max(sup, std::abs(below - ref.cdf_left(xs[i])));
        sup = std::max(sup, std::abs(here - ref.cdf(xs[i])));
        below = here;
    }
    return sup;
}

double ks_distance(const LogAverageMeasure& a, const LogAverageMeasure& b) {
    std::vector<double> pts = a.sorted_values();
    pts.insert(pts.end(), b.sorted_values().begin(), b.sorted_values().end());
    std::sort(pts.begin(), pts.end());
    double sup = 0.0;
    for (double x : pts) sup = std::max(sup, std::abs(a.cdf(x) - b.cdf(x)));
    return sup;
}

namespace {

// int_u^v |c - F| for monotone F.
double segment_gap(double c, double u, double v, const ReferenceDistribution& ref) {
    if (v <= u) return 0.0;
    const double fu = ref.cdf(u);
    const double fv = ref.cdf_left(v);
    if (fv <= c) return c * (v - u) - ref.cdf_integral(u, v);
    if (fu >= c) return ref.cdf_integral(u, v) - c * (v - u);
    double lo = u, hi = v;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (ref.cdf(mid) < c ? lo : hi) = mid;
    }
    const double x = 0.5 * (lo + hi);
    return (c * (x - u) - ref.cdf_integral(u, x)) + (ref.cdf_integral(x, v) - c * (v - x));
}

// sum_k w_k (lo - x_k)^+ and sum_k w_k (x_k - hi)^+, harmonic normalizer.
std::pair<double, double> measure_tails(const LogAverageMeasure& m, double lo, double hi) {
    double left = 0.0, right = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double w = 1.0 / static_cast<double>(k + 1);
        left += w * std::max(0.0, lo - m.atoms()[k]);
        right += w * std::max(0.0, m.atoms()[k] - hi);
    }
    const double z = m.normalizer(Normalization::harmonic);
    return {left / z, right / z};
}

void check_window(double window) {
    if (!(window > 0.0) || !std::isfinite(window)) throw Error(ErrorKind::domain, "W1 window must be positive");
}

}  // namespace

WassersteinResult wasserstein1(const LogAverageMeasure& m, const ReferenceDistribution& ref, double window) {
    check_window(window);
    const auto& xs = m.sorted_values();
    const auto& cum = m.cumulative_weight();
    const double z = m.normalizer(Normalization::harmonic);
    WassersteinResult out;
    out.window = window;
    double u = -window;
    double level = m.cdf(-window);
    auto first = std::upper_bound(xs.begin(), xs.end(), -window);
    for (auto it = first; it != xs.end() && *it < window; ++it) {
        out.value += segment_gap(level, u, *it, ref);
        u = *it;
        level = std::min(cum[static_cast<std::size_t>(it - xs.begin())] / z, 1.0);
    }
    out.value += segment_gap(level, u, window, ref);
    const auto [ml, mr] = measure_tails(m, -window, window);
    const double rl = ref.antiderivative(-window);
    const double rr = ref.antiderivative(window) - window + ref.mean();
    out.tail_bound = ml + mr + rl + rr;
    return out;
}

WassersteinResult wasserstein1(const LogAverageMeasure& a, const LogAverageMeasure& b, double window) {
    check_window(window);
    std::vector<double> pts{-window, window};
    for (const auto* m : {&a, &b}) {
        for (double x : m->sorted_values())
            if (x > -window && x < window) pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    WassersteinResult out;
    out.window = window;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        out.value += std::abs(a.cdf(pts[i]) - b.cdf(pts[i])) * (pts[i + 1] - pts[i]);
    const auto [al, ar] = measure_tails(a, -window, window);
    const auto [bl, br] = measure_tails(b, -window, window);
    out.tail_bound = al + ar + bl + br;
    return out;
}

std::complex<double> delta_n(const LogAverageMeasure& m, const ReferenceDistribution& ref, double t) {
    const double log_n = m.normalizer(Normalization::log);
    return m.charfn(t, Normalization::log) - ref.charfn(t) * (m.normalizer(Normalization::harmonic) / log_n);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    if (points == 0) throw Error(ErrorKind::domain, "grid needs at least one point");
    if (points == 1) return {lo};
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    g.back() = hi;
    return g;
}

std::vector<double> delta_sq_path(std::span<const double> series, std::complex<double> phi_ref, double t) {
    std::vector<double> out(series.size(), 0.0);
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double w = 1.0 / static_cast<double>(k + 1);
        re += w * (std::cos(t * series[k]) - phi_ref.real());
        im += w * (std::sin(t * series[k]) - phi_ref.imag());
        if (k >= 1) {
            const double l = std::log(static_cast<double>(k + 1));
            out[k] = (re * re + im * im) / (l * l);
        }
    }
    return out;
}

ConditionReport il_sum(const std::vector<std::vector<double>>& replicates, const ReferenceDistribution& ref,
                       std::span<const double> t_grid, std::size_t n_max, std::vector<std::size_t> checkpoints) {
    if (replicates.empty()) throw Error(ErrorKind::domain, "IL sum needs at least one replicate");
    if (n_max < 2) throw Error(ErrorKind::domain, "IL sum needs n_max >= 2");
    if (t_grid.empty()) throw Error(ErrorKind::domain, "IL sum needs a nonempty t grid");
    for (const auto& r : replicates)
        if (r.size() < n_max) throw Error(ErrorKind::domain, "replicate shorter than n_max");
    if (checkpoints.empty()) checkpoints = dyadic_checkpoints(n_max);
    std::erase_if(checkpoints, [&](std::size_t c) { return c < 2 || c > n_max; });
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

    const std::size_t nt = t_grid.size();
    const std::size_t nc = checkpoints.size();
    // per (t, checkpoint): sums over replicates of the partial sum and of the summand
    std::vector<double> s1(nt * nc, 0.0), s2(nt * nc, 0.0), d1(nt * nc, 0.0), d2(nt * nc, 0.0);
    // Lipschitz bound |d/dt Delta_N(t)| <= (1/log N) sum_k (|G_k| + E|X_ref|) / k, averaged over replicates
    double lipschitz = 0.0;
    const double ref_abs = ref.abs_first_moment();
    for (const auto& rep : replicates) {
        double l = 0.0;
        for (std::size_t k = 0; k < n_max; ++k) l += (std::abs(rep[k]) + ref_abs) / static_cast<double>(k + 1);
        lipschitz += l / std::log(static_cast<double>(n_max));
        for (std::size_t ti = 0; ti < nt; ++ti) {
            const auto path = delta_sq_path(std::span<const double>(rep.data(), n_max), ref.charfn(t_grid[ti]),
                                            t_grid[ti]);
            double partial = 0.0;
            std::size_t ci = 0;
            for (std::size_t n = 2; n <= n_max; ++n) {
                const double nn = static_cast<double>(n);
                partial += path[n - 1] / (nn * std::log(nn));
                if (ci < nc && checkpoints[ci] == n) {
                    const std::size_t at = ti * nc + ci;
                    s1[at] += partial;
                    s2[at] += partial * partial;
                    d1[at] += path[n - 1];
                    d2[at] += path[n - 1] * path[n - 1];
                    ++ci;
                }
            }
        }
    }
    const auto m = static_cast<double>(replicates.size());
    auto mean_se = [m](double a, double b) {
        const double mean = a / m;
        const double var = m > 1 ? std::max(0.0, (b - m * mean * mean) / (m - 1.0)) : 0.0;
        return std::make_pair(mean, std::sqrt(var / m));
    };

    ConditionReport rep;
    rep.id = ConditionId::IL;
    rep.estimator = Estimator::monte_carlo;
    rep.normalizer = "log";
    rep.policy = "exact recursion at every n; recorded at checkpoints";
    const double spacing = nt > 1 ? (t_grid.back() - t_grid.front()) / static_cast<double>(nt - 1) : 0.0;
    rep.parameters = {{"replicates", replicates.size()},
                      {"n_max", n_max},
                      {"t_points", nt},
                      {"t_min", t_grid.front()},
                      {"t_max", t_grid.back()},
                      {"grid_spacing", spacing},
                      {"delta_sup_gap", 0.5 * spacing * lipschitz / m},
                      {"reference", ref.kind_name()}};
    for (std::size_t ti = 0; ti < nt; ++ti) {
        Trajectory tr;
        tr.t = t_grid[ti];
        for (std::size_t ci = 0; ci < nc; ++ci) {
            const std::size_t at = ti * nc + ci;
            const auto [v, se] = mean_se(s1[at], s2[at]);
            const auto [dv, dse] = mean_se(d1[at], d2[at]);
            tr.points.push_back({checkpoints[ci], v, se, dv, dse});
        }
        rep.trajectories.push_back(std::move(tr));
    }
    for (std::size_t ci = 0; ci < nc; ++ci) {
        std::size_t best = 0;
        for (std::size_t ti = 1; ti < nt; ++ti)
            if (rep.trajectories[ti].points[ci].value > rep.trajectories[best].points[ci].value) best = ti;
        ReportPoint p = rep.trajectories[best].points[ci];
        p.summand.reset();
        p.summand_stderr.reset();
        rep.sup_over_grid.push_back(p);
    }
    return rep;
}

ScaledAtoms scale_series(std::span<const double> G, std::span<const double> a) {
    if (a.size() < G.size()) throw Error(ErrorKind::domain, "scaling sequence shorter than the series");
    ScaledAtoms out;
    out.atoms.resize(G.size());
    for (std::size_t k = 0; k < G.size(); ++k) {
        out.atoms[k] = a[k] * G[k];
        if (a[k] == 0.0) out.zero_factor_indices.push_back(k + 1);
    }
    return out;
}

std::vector<DistancePoint> distance_trajectory(std::span<const double> series, const ReferenceDistribution& ref,
                                               const std::vector<std::size_t>& checkpoints, double window) {
    std::vector<DistancePoint> out;
    for (std::size_t n : checkpoints) {
        if (n == 0 || n > series.size()) throw Error(ErrorKind::domain, "checkpoint outside the series");
        const auto m = LogAverageMeasure::prefix(series, n);
        const auto w = wasserstein1(m, ref, window);
        out.push_back({n, ks_distance(m, ref), w.value, w.tail_bound});
    }
    return out;
}

std::vector<double> simulate_series(const SeriesSpec& spec, std::uint64_t seed) {
    if (spec.n == 0) throw Error(ErrorKind::domain, "series length must be >= 1");
    switch (spec.family.kind) {
        case KernelFamily::Kind::fgn: {
            const auto path = sample_fgn(spec.family.hurst, spec.n, seed);
            auto vs = variation_series(path, ChaosOrder(spec.family.q));
            return spec.which == SeriesKind::G ? std::move(vs.G) : std::move(vs.G_hat);
        }
        case KernelFamily::Kind::product:
        case KernelFamily::Kind::product_reversed:
            return product_series(iid_normals(spec.n + 1, seed),
                                  spec.family.kind == KernelFamily::Kind::product_reversed);
    }
    throw Error(ErrorKind::domain, "unknown kernel family");
}

std::vector<std::vector<double>> simulate_replicates(const SeriesSpec& spec, std::size_t replicates,
                                                     std::uint64_t master_seed, unsigned threads) {
    std::vector<std::vector<double>> out(replicates);
    ordered_parallel(
        replicates, threads, [&](std::size_t r) { return simulate_series(spec, derive_seed(master_seed, r)); },
        [&](std::size_t r, std::vector<double> s) { out[r] = std::move(s); });
    return out;
}

void write_atoms_csv(std::ostream& out, std::span<const double> series) {
    out << "k,G_k,weight\n";
    for (std::size_t k = 0; k < series.size(); ++k)
        out << (k + 1) << ',' << format_double(series[k]) << ',' << format_double(1.0 / static_cast<double>(k + 1))
            << '\n';
}

}  // namespace aslt
