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

#include "aslt/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "aslt/chaos_stats.hpp"
#include "aslt/error.hpp"
#include "aslt/gaussian_inputs.hpp"
#include "aslt/hermite.hpp"
#include "aslt/io.hpp"
#include "aslt/parallel.hpp"
#include "aslt/rng.hpp"
#include "quadrature.hpp"

namespace aslt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCutoff = 2.0;

double integrate_k0(double a, double b) {
    const auto& gl = detail::gauss_legendre16();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += gl.w[i] * std::cyl_bessel_k(0.0, mid + half * gl.x[i]);
    return half * s;
}

// G(x) = int_0^x K_0 for x >= 0.
double k0_integral(double x) {
    if (x <= 0.0) return 0.0;
    if (x <= kSeriesCutoff) {
        // termwise integral of K_0 = -(ln(x/2) + gamma) I_0 + sum (x/2)^{2k}/(k!)^2 H_k
        const double base = -std::log(0.5 * x) - std::numbers::egamma;
        const double x2 = x * x;
        double a = 1.0;  // 1 / (4^k (k!)^2)
        double xp = x;   // x^{2k+1}
        double harmonic = 0.0;
        double sum = 0.0;
        for (int k = 0; k < 60; ++k) {
            if (k > 0) {
                a /= 4.0 * k * k;
                xp *= x2;
                harmonic += 1.0 / k;
            }
            const double odd = 2.0 * k + 1.0;
            const double term = a * xp / odd * (base + harmonic + 1.0 / odd);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    if (x >= 45.0) return kPi / 2.0;
    // pi/2 minus the tail, integrated on panels of doubling width
    double tail = 0.0;
    double lo = x;
    double width = 0.5;
    while (lo < x + 45.0) {
        tail += integrate_k0(lo, lo + width);
        lo += width;
        width *= 2.0;
    }
    return kPi / 2.0 - tail;
}

double product_normal_antiderivative(double x) {
    // int_{-inf}^x F = E(x - XY)^+; F - 1/2 is odd, so its integral from 0 is even.
    const double ax = std::abs(x);
    if (ax == 0.0) return 1.0 / kPi;
    const double xk1 = ax > 700.0 ? 0.0 : ax * std::cyl_bessel_k(1.0, ax);
    return 1.0 / kPi + 0.5 * x + (ax * k0_integral(ax) + xk1 - 1.0) / kPi;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

void validate_table(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.empty() || p.size() != q.size())
        throw Error(ErrorKind::format, "reference table needs equal, nonzero numbers of probabilities and quantiles");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i]) || !std::isfinite(q[i])) throw Error(ErrorKind::format, "non-finite table entry");
        if (p[i] <= 0.0 || p[i] > 1.0) throw Error(ErrorKind::format, "table probabilities must lie in (0, 1]");
        if (i > 0 && p[i] <= p[i - 1]) throw Error(ErrorKind::format, "table probabilities must increase strictly");
        if (i > 0 && q[i] < q[i - 1]) throw Error(ErrorKind::format, "table quantiles must be nondecreasing");
    }
}

std::vector<double> table_areas(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> area(q.size(), 0.0);
    for (std::size_t i = 1; i < q.size(); ++i) area[i] = area[i - 1] + 0.5 * (q[i] - q[i - 1]) * (p[i - 1] + p[i]);
    return area;
}

ReferenceDistribution::Kind parse_kind(const std::string& s) {
    if (s == "hermite_table") return ReferenceDistribution::Kind::hermite_table;
    if (s == "custom_table") return ReferenceDistribution::Kind::custom_table;
    throw Error(ErrorKind::format, "reference file kind must be a table kind, got '" + s + "'");
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double product_normal_cdf(double x) {
    if (std::isnan(x)) return x;
    const double g = k0_integral(std::abs(x)) / kPi;
    return x >= 0.0 ? 0.5 + g : 0.5 - g;
}

ReferenceDistribution ReferenceDistribution::std_normal() { return ReferenceDistribution(Kind::std_normal); }
ReferenceDistribution ReferenceDistribution::product_normal() { return ReferenceDistribution(Kind::product_normal); }

ReferenceDistribution ReferenceDistribution::from_table(Kind kind, std::vector<double> probabilities,
                                                        std::vector<double> quantiles, nlohmann::json metadata) {
    if (kind != Kind::hermite_table && kind != Kind::custom_table)
        throw Error(ErrorKind::domain, "from_table needs a table kind");
    validate_table(probabilities, quantiles);
    ReferenceDistribution r(kind);
    r.cumulative_area_ = table_areas(probabilities, quantiles);
    r.probabilities_ = std::move(probabilities);
    r.quantiles_ = std::move(quantiles);
    r.metadata_ = metadata.is_null() ? nlohmann::json::object() : std::move(metadata);
    return r;
}

ReferenceDistribution ReferenceDistribution::from_samples(std::vector<double> samples, Kind kind,
                                                          nlohmann::json metadata) {
    if (samples.empty()) throw Error(ErrorKind::domain, "from_samples needs at least one sample");
    for (double s : samples)
        if (!std::isfinite(s)) throw Error(ErrorKind::numeric, "non-finite sample in reference construction");
    std::sort(samples.begin(), samples.end());
    const auto m = static_cast<double>(samples.size());
    std::vector<double> p(samples.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = (static_cast<double>(i) + 0.5) / m;
    return from_table(kind, std::move(p), std::move(samples), std::move(metadata));
}

ReferenceDistribution ReferenceDistribution::point_mass(double location) {
    return from_table(Kind::custom_table, {1.0}, {location}, {{"point_mass", location}});
}

double ReferenceDistribution::base_cdf(double x) const {
    switch (kind_) {
        case Kind::std_normal: return normal_cdf(x);
        case Kind::product_normal: return product_normal_cdf(x);
        default: break;
    }
    const auto& q = quantiles_;
    const auto& p = probabilities_;
    if (x < q.front()) return 0.0;
    if (x >= q.back()) return 1.0;
    const auto j = static_cast<std::size_t>(std::upper_bound(q.begin(), q.end(), x) - q.begin());
    const std::size_t i = j - 1;
    return p[i] + (p[j] - p[i]) * (x - q[i]) / (q[j] - q[i]);
}

double ReferenceDistribution::base_cdf_left(double x) const {
    if (!is_table()) return base_cdf(x);
    const auto& q = quantiles_;
    const auto& p = probabilities_;
    if (x <= q.front()) return 0.0;
    if (x > q.back()) return 1.0;
    const auto j = static_cast<std::size_t>(std::lower_bound(q.begin(), q.end(), x) - q.begin());
    const std::size_t i = j - 1;
    return p[i] + (p[j] - p[i]) * (x - q[i]) / (q[j] - q[i]);
}

double ReferenceDistribution::base_antiderivative(double x) const {
    switch (kind_) {
        case Kind::std_normal: return x * normal_cdf(x) + normal_pdf(x);
        case Kind::product_normal: return product_normal_antiderivative(x);
        default: break;
    }
    const auto& q = quantiles_;
    const auto& p = probabilities_;
    if (x <= q.front()) return 0.0;
    if (x >= q.back()) return cumulative_area_.back() + (x - q.back());
    const auto j = static_cast<std::size_t>(std::upper_bound(q.begin(), q.end(), x) - q.begin());
    const std::size_t i = j - 1;
    return cumulative_area_[i] + 0.5 * (x - q[i]) * (p[i] + base_cdf(x));
}

double ReferenceDistribution::cdf(double x) const { return base_cdf(x / scale_); }
double ReferenceDistribution::cdf_left(double x) const { return base_cdf_left(x / scale_); }

double ReferenceDistribution::cdf_integral(double a, double b) const {
    return scale_ * (base_antiderivative(b / scale_) - base_antiderivative(a / scale_));
}

double ReferenceDistribution::antiderivative(double x) const { return scale_ * base_antiderivative(x / scale_); }

double ReferenceDistribution::mean() const {
    if (!is_table()) return 0.0;
    return scale_ * (quantiles_.back() - cumulative_area_.back());
}

std::complex<double> ReferenceDistribution::charfn(double t) const {
    const double s = t * scale_;
    switch (kind_) {
        case Kind::std_normal: return {std::exp(-0.5 * s * s), 0.0};
        case Kind::product_normal: return {1.0 / std::sqrt(1.0 + s * s), 0.0};
        default: break;
    }
    double re = 0.0, im = 0.0;
    for (double v : quantiles_) {
        re += std::cos(s * v);
        im += std::sin(s * v);
    }
    const auto m = static_cast<double>(quantiles_.size());
    return {re / m, im / m};
}

double ReferenceDistribution::abs_first_moment() const {
    switch (kind_) {
        case Kind::std_normal: return scale_ * std::sqrt(2.0 / kPi);
        case Kind::product_normal: return scale_ * 2.0 / kPi;
        default: break;
    }
    double s = 0.0;
    for (double v : quantiles_) s += std::abs(v);
    return scale_ * s / static_cast<double>(quantiles_.size());
}

ReferenceDistribution ReferenceDistribution::scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::domain, "scale factor must be positive and finite");
    if (!is_table()) {
        ReferenceDistribution r = *this;
        r.scale_ *= c;
        return r;
    }
    std::vector<double> q = quantiles_;
    for (double& v : q) v *= c;
    nlohmann::json meta = metadata_;
    meta["scale"] = meta.value("scale", 1.0) * c;
    return from_table(kind_, probabilities_, std::move(q), std::move(meta));
}

std::string ReferenceDistribution::kind_name() const {
    switch (kind_) {
        case Kind::std_normal: return "std_normal";
        case Kind::product_normal: return "product_normal";
        case Kind::hermite_table: return "hermite_table";
        case Kind::custom_table: return "custom_table";
    }
    return "?";
}

ReferenceDistribution build_hermite_reference(const HermiteReferenceConfig& config) {
    if (config.q < 2) throw Error(ErrorKind::domain, "Hermite reference needs q >= 2");
    if (!(config.hurst < 1.0)) throw Error(ErrorKind::domain, "Hurst index must be < 1");
    if (config.hurst <= 1.0 - 1.0 / (2.0 * config.q)) {
        throw Error(ErrorKind::regime, "Hermite reference needs H > 1 - 1/(2q); below it the limit is Gaussian, "
                                       "compare against std_normal instead");
    }
    if (config.n < 2 || config.replicates < 1) throw Error(ErrorKind::domain, "reference needs n >= 2 and M >= 1");
    const ChaosOrder q(config.q);
    const double sd = std::sqrt(variance_Vn(q, config.hurst, config.n));
    std::vector<double> samples(config.replicates);
    std::size_t cholesky_runs = 0;
    ordered_parallel(
        config.replicates, config.threads,
        [&](std::size_t r) {
            const GaussianPath path = sample_fgn(config.hurst, config.n, derive_seed(config.seed, r));
            double v = 0.0;
            for (double x : path.values) v += hermite_eval(q, x);
            return std::make_pair(v / sd, path.sampler);
        },
        [&](std::size_t r, std::pair<double, SamplerTag> out) {
            samples[r] = out.first;
            if (out.second == SamplerTag::cholesky) ++cholesky_runs;
        });
    nlohmann::json meta = {{"hurst", config.hurst},
                           {"q", config.q},
                           {"n", config.n},
                           {"replicates", config.replicates},
                           {"seed", config.seed},
                           {"build_date", config.build_date},
                           {"normalization", "unit_variance"},
                           {"cholesky_fallbacks", cholesky_runs}};
    return ReferenceDistribution::from_samples(std::move(samples), ReferenceDistribution::Kind::hermite_table,
                                               std::move(meta));
}

void save_reference(const ReferenceDistribution& ref, std::ostream& out) {
    if (!ref.is_table()) throw Error(ErrorKind::format, "only table references can be saved");
    std::ostringstream body;
    body << "ASLTREF v1\n";
    nlohmann::json head = {{"kind", ref.kind_name()}, {"size", ref.quantiles().size()}, {"metadata", ref.metadata()}};
    body << head.dump() << '\n';
    body << "p,quantile\n";
    for (std::size_t i = 0; i < ref.quantiles().size(); ++i)
        body << format_double(ref.probabilities()[i]) << ',' << format_double(ref.quantiles()[i]) << '\n';
    const std::string text = body.str();
    out << text << "#checksum=" << hex64(fnv1a64(text)) << '\n';
    if (!out) throw Error(ErrorKind::io, "failed to write reference table");
}

void save_reference(const ReferenceDistribution& ref, const std::filesystem::path& path) {
    std::ostringstream s;
    save_reference(ref, s);
    write_file(path, s.str());
}

ReferenceDistribution load_reference(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto mark = text.rfind("#checksum=");
    if (mark == std::string::npos) throw Error(ErrorKind::format, "reference file has no checksum line");
    const std::string body = text.substr(0, mark);
    std::string stored = text.substr(mark + 10);
    while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
    if (stored != hex64(fnv1a64(body)))
        throw Error(ErrorKind::format, "reference checksum mismatch (stored " + stored + ")");

    std::istringstream lines(body);
    std::string line;
    if (!std::getline(lines, line) || line != "ASLTREF v1")
        throw Error(ErrorKind::format, "unsupported reference header '" + line + "'");
    if (!std::getline(lines, line)) throw Error(ErrorKind::format, "missing reference metadata line");
    nlohmann::json head;
    try {
        head = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::format, std::string("bad reference metadata: ") + e.what());
    }
    if (!std::getline(lines, line) || line != "p,quantile") throw Error(ErrorKind::format, "missing column header");
    std::vector<double> p, q;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorKind::format, "malformed reference row '" + line + "'");
        try {
            std::size_t used = 0;
            p.push_back(std::stod(line.substr(0, comma), &used));
            q.push_back(std::stod(line.substr(comma + 1), &used));
        } catch (const std::exception&) {
            throw Error(ErrorKind::format, "malformed reference row '" + line + "'");
        }
    }
    if (head.value("size", std::size_t{0}) != q.size())
        throw Error(ErrorKind::format, "reference row count does not match its metadata");
    return ReferenceDistribution::from_table(parse_kind(head.value("kind", std::string())), std::move(p), std::move(q),
                                             head.value("metadata", nlohmann::json::object()));
}

ReferenceDistribution load_reference(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    return load_reference(in);
}

}  // namespace aslt
