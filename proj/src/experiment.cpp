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

#include "aslt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "aslt/chaos_kernels.hpp"
#include "aslt/chaos_stats.hpp"
#include "aslt/conditions.hpp"
#include "aslt/gaussian_inputs.hpp"
#include "aslt/io.hpp"
#include "aslt/reference.hpp"

namespace aslt {

namespace {

using nlohmann::json;

/// Typed access to one JSON object with schema errors naming the field.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw Error(ErrorKind::schema, where("") + " must be a JSON object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        const std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto& [k, v] : j_.items())
            if (!ok.count(k)) throw Error(ErrorKind::schema, "unknown field " + where(k));
    }

    bool has(const char* key) const { return j_.contains(key); }

    template <class T>
    T req(const char* key) const {
        if (!j_.contains(key)) throw Error(ErrorKind::schema, "missing required field " + where(key));
        return as<T>(key);
    }

    template <class T>
    T opt(const char* key, T fallback) const {
        return j_.contains(key) ? as<T>(key) : fallback;
    }

    Section sub(const char* key) const {
        if (!j_.contains(key)) throw Error(ErrorKind::schema, "missing required field " + where(key));
        return Section(j_.at(key), where(key));
    }

    std::string where(const std::string& key) const { return key.empty() ? path_ : path_ + "/" + key; }

private:
    template <class T>
    T as(const char* key) const {
        const json& v = j_.at(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw Error(ErrorKind::schema, where(key) + " must be a boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw Error(ErrorKind::schema, where(key) + " must be a string");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0))
                throw Error(ErrorKind::schema, where(key) + " must be a nonnegative integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw Error(ErrorKind::schema, where(key) + " must be a number");
        }
        return v.get<T>();
    }

    const json& j_;
    std::string path_;
};

struct OutputSet {
    std::filesystem::path dir;
    json files = json::array();

    void write(const std::string& name, const std::string& contents) {
        write_file(dir / name, contents);
        files.push_back({{"file", name}, {"bytes", contents.size()}, {"fnv1a64", hex64(fnv1a64(contents))}});
    }
    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
};

KernelFamily parse_family(const Section& s) {
    const auto name = s.opt<std::string>("family", "fgn");
    if (name == "fgn") return KernelFamily::fgn(s.req<int>("q"), s.req<double>("hurst"));
    try {
        return KernelFamily::parse(name, 3, 0.5);
    } catch (const Error& e) {
        throw Error(ErrorKind::schema, s.where("family") + ": " + e.what());
    }
}

SeriesKind parse_which(const Section& s) {
    const auto w = s.opt<std::string>("which", "G");
    if (w == "G") return SeriesKind::G;
    if (w == "G_hat") return SeriesKind::G_hat;
    throw Error(ErrorKind::schema, s.where("which") + " must be \"G\" or \"G_hat\"");
}

std::vector<double> parse_grid(const Section& s) {
    if (!s.has("t_grid")) return uniform_grid();
    const Section g = s.sub("t_grid");
    g.allow({"lo", "hi", "points"});
    const auto points = g.opt<std::size_t>("points", 41);
    if (points < 1) throw Error(ErrorKind::schema, g.where("points") + " must be >= 1");
    return uniform_grid(g.opt<double>("lo", -5.0), g.opt<double>("hi", 5.0), points);
}

std::size_t positive_size(const Section& s, const char* key, std::size_t min = 1) {
    const auto v = s.req<std::size_t>(key);
    if (v < min) throw Error(ErrorKind::schema, s.where(key) + " must be >= " + std::to_string(min));
    return v;
}

HermiteReferenceConfig hermite_config(const Section& s, unsigned threads) {
    HermiteReferenceConfig c;
    c.hurst = s.req<double>("hurst");
    c.q = s.req<int>("q");
    c.n = s.opt<std::size_t>("n", c.n);
    c.replicates = s.opt<std::size_t>("replicates", c.replicates);
    c.seed = s.req<std::uint64_t>("seed");
    c.threads = threads;
    c.build_date = s.opt<std::string>("build_date", c.build_date);
    return c;
}

bool metadata_matches(const ReferenceDistribution& ref, const HermiteReferenceConfig& c) {
    const json& m = ref.metadata();
    return ref.kind() == ReferenceDistribution::Kind::hermite_table && m.value("hurst", -1.0) == c.hurst &&
           m.value("q", -1) == c.q && m.value("n", std::size_t{0}) == c.n &&
           m.value("replicates", std::size_t{0}) == c.replicates && m.value("seed", std::uint64_t{0}) == c.seed;
}

ReferenceDistribution parse_reference(const Section& parent, unsigned threads) {
    const Section s = parent.sub("reference");
    const auto kind = s.req<std::string>("kind");
    if (kind == "std_normal") {
        s.allow({"kind"});
        return ReferenceDistribution::std_normal();
    }
    if (kind == "product_normal") {
        s.allow({"kind"});
        return ReferenceDistribution::product_normal();
    }
    if (kind == "file") {
        s.allow({"kind", "path"});
        return load_reference(std::filesystem::path(s.req<std::string>("path")));
    }
    if (kind == "hermite_table") {
        s.allow({"kind", "hurst", "q", "n", "replicates", "seed", "build_date", "cache"});
        const auto config = hermite_config(s, threads);
        if (s.has("cache")) {
            const std::filesystem::path cache = s.req<std::string>("cache");
            if (std::filesystem::exists(cache)) {
                auto ref = load_reference(cache);
                if (!metadata_matches(ref, config))
                    throw Error(ErrorKind::format, "cached reference " + cache.string() +
                                                       " was built with different parameters");
                return ref;
            }
            auto ref = build_hermite_reference(config);
            save_reference(ref, cache);
            return ref;
        }
        return build_hermite_reference(config);
    }
    throw Error(ErrorKind::schema, s.where("kind") + " must be std_normal, product_normal, hermite_table or file");
}

json family_json(const KernelFamily& f) {
    json j = {{"family", f.name()}, {"q", f.order()}};
    if (f.kind == KernelFamily::Kind::fgn) j["hurst"] = f.hurst;
    return j;
}

template <class Write>
std::string to_text(Write&& w) {
    std::ostringstream s;
    w(s);
    return s.str();
}

void write_report(OutputSet& out, const std::string& stem, const ConditionReport& rep) {
    out.write(stem + ".csv", to_text([&](std::ostream& s) { rep.write_csv(s); }));
    out.write(stem + "_long.csv", to_text([&](std::ostream& s) { rep.write_long_csv(s); }));
    out.write_json(stem + ".json", rep.sidecar());
}

// Experiments -----------------------------------------------------------------

void run_sample_fgn(const Section& s, OutputSet& out) {
    s.allow({"experiment", "seed", "hurst", "n", "force_cholesky"});
    SamplerOptions opts;
    opts.force_cholesky = s.opt<bool>("force_cholesky", false);
    const auto path = sample_fgn(s.req<double>("hurst"), positive_size(s, "n"), s.req<std::uint64_t>("seed"), opts);
    out.write("path.csv", to_text([&](std::ostream& o) { write_path_csv(o, path); }));
}

void run_aslt(const Section& s, const RunOptions& opts, OutputSet& out) {
    s.allow({"experiment", "seed", "family", "q", "hurst", "n", "which", "reference", "window", "dump_atoms",
             "max_dump"});
    const SeriesSpec spec{parse_family(s), positive_size(s, "n", 2), parse_which(s)};
    const auto ref = parse_reference(s, opts.threads);
    const double window = s.opt<double>("window", 12.0);
    const auto series = simulate_series(spec, s.req<std::uint64_t>("seed"));
    const auto traj = distance_trajectory(series, ref, dyadic_checkpoints(spec.n), window);
    out.write("distances.csv", to_text([&](std::ostream& o) {
                  o << "n,ks,w1,w1_tail_bound\n";
                  for (const auto& p : traj)
                      o << p.n << ',' << format_double(p.ks) << ',' << format_double(p.w1) << ','
                        << format_double(p.w1_tail_bound) << '\n';
              }));
    json meta = family_json(spec.family);
    meta["normalizer"] = "harmonic";
    meta["which"] = spec.which == SeriesKind::G ? "G" : "G_hat";
    meta["reference"] = ref.kind_name();
    meta["window"] = window;
    meta["columns"] = {{"ks", "sup |F_n - F_ref|"}, {"w1", "integral of |F_n - F_ref| over [-window, window]"}};
    out.write_json("distances.json", meta);
    if (s.opt<bool>("dump_atoms", false)) {
        const auto max_dump = s.opt<std::size_t>("max_dump", std::size_t{1} << 20);
        if (series.size() > max_dump)
            throw Error(ErrorKind::budget, "atom dump of " + std::to_string(series.size()) +
                                               " rows exceeds max_dump; raise it explicitly");
        out.write("atoms.csv", to_text([&](std::ostream& o) { write_atoms_csv(o, series); }));
    }
}

void run_il_sum(const Section& s, const RunOptions& opts, OutputSet& out) {
    s.allow({"experiment", "seed", "family", "q", "hurst", "n", "which", "replicates", "reference", "t_grid"});
    const SeriesSpec spec{parse_family(s), positive_size(s, "n", 2), parse_which(s)};
    const auto ref = parse_reference(s, opts.threads);
    const auto grid = parse_grid(s);
    const auto reps =
        simulate_replicates(spec, positive_size(s, "replicates"), s.req<std::uint64_t>("seed"), opts.threads);
    auto rep = il_sum(reps, ref, grid, spec.n);
    rep.parameters.update(family_json(spec.family));
    write_report(out, "il_sum", rep);
}

void run_conditions(const Section& s, const RunOptions& opts, OutputSet& out) {
    s.allow({"experiment", "seed", "condition", "family", "q", "hurst", "n", "r", "normalized", "reference", "t_grid",
             "phi_source", "replicates", "which"});
    const auto id = s.req<std::string>("condition");
    const auto n = positive_size(s, "n", 2);
    const auto seed = s.req<std::uint64_t>("seed");
    ConditionReport rep;
    if (id == "A1") {
        rep = condition_a1(parse_family(s), s.req<int>("r"), n);
    } else if (id == "A2") {
        rep = condition_a2(parse_family(s), n, s.opt<bool>("normalized", true));
    } else if (id == "B1") {
        PhiSource src;
        src.seed = seed;
        src.threads = opts.threads;
        if (s.has("phi_source")) {
            const Section p = s.sub("phi_source");
            p.allow({"kind", "replicates", "exact_every_k_up_to"});
            const auto kind = p.req<std::string>("kind");
            if (kind == "exact_q2") {
                src.kind = PhiSource::Kind::exact_q2;
            } else if (kind == "monte_carlo") {
                src.kind = PhiSource::Kind::monte_carlo;
            } else {
                throw Error(ErrorKind::schema, p.where("kind") + " must be exact_q2 or monte_carlo");
            }
            src.replicates = p.opt<std::size_t>("replicates", src.replicates);
            src.exact_every_k_up_to = p.opt<std::size_t>("exact_every_k_up_to", src.exact_every_k_up_to);
        }
        const auto ref = parse_reference(s, opts.threads);
        rep = condition_b1(s.req<int>("q"), s.req<double>("hurst"), ref, parse_grid(s), n, src, parse_which(s));
    } else if (id == "B2") {
        const SeriesSpec spec{parse_family(s), n, parse_which(s)};
        const auto reps = simulate_replicates(spec, positive_size(s, "replicates"), seed, opts.threads);
        rep = condition_b2(reps, n);
        rep.parameters.update(family_json(spec.family));
        rep.parameters["seed"] = seed;
    } else {
        throw Error(ErrorKind::schema, s.where("condition") + " must be A1, A2, B1 or B2");
    }
    write_report(out, "condition_" + id, rep);
}

void run_kernels_check(const Section& s, OutputSet& out) {
    s.allow({"experiment", "seed", "family", "k_max", "tolerance"});
    const auto family = parse_family(s);
    if (family.kind == KernelFamily::Kind::fgn)
        throw Error(ErrorKind::schema, s.where("family") + " must be product or product_reversed");
    const auto k_max = s.opt<std::size_t>("k_max", 20);
    const double tol = s.opt<double>("tolerance", 1e-12);
    std::vector<Tensor> contracted[3];
    for (std::size_t k = 1; k <= k_max; ++k) {
        const auto g = make_kernel(family, k);
        for (int r = 0; r < 3; ++r) contracted[r].push_back(contract(g, g, static_cast<std::size_t>(r)));
    }
    json summary = family_json(family);
    summary["k_max"] = k_max;
    summary["tolerance"] = tol;
    bool all = true;
    std::ostringstream csv;
    csv << "k,l,r,oracle,closed_form,rel_error,match\n";
    json per_r = json::array();
    for (int r = 0; r < 3; ++r) {
        std::size_t matched = 0, total = 0;
        double worst = 0.0;
        for (std::size_t k = 1; k <= k_max; ++k) {
            for (std::size_t l = 1; l <= k_max; ++l) {
                const double oracle = inner_product(contracted[r][k - 1], contracted[r][l - 1]);
                const double closed = product_contraction_closed_form(r, k, l);
                const double rel = std::abs(oracle - closed) / std::abs(closed);
                const bool ok = rel <= tol;
                matched += ok;
                ++total;
                worst = std::max(worst, rel);
                csv << k << ',' << l << ',' << r << ',' << format_double(oracle) << ',' << format_double(closed) << ','
                    << format_double(rel) << ',' << (ok ? "true" : "false") << '\n';
            }
        }
        all = all && matched == total;
        per_r.push_back({{"r", r}, {"matched", matched}, {"pairs", total}, {"max_rel_error", worst}});
    }
    summary["per_r"] = per_r;
    summary["all_match"] = all;
    out.write("kernels_check.csv", csv.str());
    out.write_json("kernels_check.json", summary);
}

void run_build_reference(const Section& s, const RunOptions& opts, OutputSet& out) {
    s.allow({"experiment", "seed", "hurst", "q", "n", "replicates", "build_date"});
    const auto ref = build_hermite_reference(hermite_config(s, opts.threads));
    out.write("reference.asltref", to_text([&](std::ostream& o) { save_reference(ref, o); }));
    const auto& qs = ref.quantiles();
    const double m = static_cast<double>(qs.size());
    double mean = 0.0;
    for (double v : qs) mean += v;
    mean /= m;
    double m2 = 0.0, m3 = 0.0;
    for (double v : qs) {
        m2 += (v - mean) * (v - mean);
        m3 += (v - mean) * (v - mean) * (v - mean);
    }
    m2 /= m;
    m3 /= m;
    out.write_json("reference_summary.json", {{"metadata", ref.metadata()},
                                              {"sample_mean", mean},
                                              {"sample_variance", m2},
                                              {"sample_skewness", m3 / std::pow(m2, 1.5)}});
}

}  // namespace

json apply_overrides(json config, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || o.empty() || o[0] != '/')
            throw Error(ErrorKind::schema, "override '" + o + "' is not of the form /json/pointer=value");
        json value;
        try {
            value = json::parse(o.substr(eq + 1));
        } catch (const json::exception&) {
            value = o.substr(eq + 1);
        }
        try {
            config[json::json_pointer(o.substr(0, eq))] = std::move(value);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::schema, "override '" + o + "': " + e.what());
        }
    }
    return config;
}

json run_experiment(const json& config, const RunOptions& options) {
    const Section s(config, "");
    const auto experiment = s.req<std::string>("experiment");
    if (!s.has("seed")) throw Error(ErrorKind::schema, "missing required field /seed (no default entropy source)");
    s.req<std::uint64_t>("seed");
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory " + options.out_dir.string());
    OutputSet out{options.out_dir};
    try {
        if (experiment == "sample_fgn") {
            run_sample_fgn(s, out);
        } else if (experiment == "aslt_run") {
            run_aslt(s, options, out);
        } else if (experiment == "il_sum") {
            run_il_sum(s, options, out);
        } else if (experiment == "conditions") {
            run_conditions(s, options, out);
        } else if (experiment == "kernels_check") {
            run_kernels_check(s, out);
        } else if (experiment == "build_reference") {
            run_build_reference(s, options, out);
        } else {
            throw Error(ErrorKind::schema, "unknown experiment '" + experiment + "'");
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::schema, std::string("config: ") + e.what());
    }
    json manifest = {{"tool", "aslt"},
                     {"version", kToolVersion},
                     {"experiment", experiment},
                     {"config", config},
                     {"outputs", out.files}};
    write_file(options.out_dir / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::schema: return 2;
        case ErrorKind::regime: return 3;
        case ErrorKind::io: return 4;
        case ErrorKind::format: return 5;
        case ErrorKind::budget: return 6;
        default: return 1;
    }
}

}  // namespace aslt
