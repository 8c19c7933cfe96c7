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

#include "aslt/chaos_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "aslt/error.hpp"
#include "aslt/gaussian_inputs.hpp"
#include "aslt/io.hpp"

namespace aslt {

// MultiIndex -----------------------------------------------------------------

MultiIndex::MultiIndex(std::initializer_list<std::uint32_t> idx) {
    for (auto v : idx) push_back(v);
}

void MultiIndex::push_back(std::uint32_t v) {
    if (order_ >= kMaxTensorOrder) throw Error(ErrorKind::budget, "tensor order exceeds kMaxTensorOrder");
    idx_[order_++] = v;
}

MultiIndex MultiIndex::head(std::size_t count) const {
    MultiIndex out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(idx_[i]);
    return out;
}

MultiIndex MultiIndex::tail_from(std::size_t start) const {
    MultiIndex out;
    for (std::size_t i = start; i < order_; ++i) out.push_back(idx_[i]);
    return out;
}

MultiIndex MultiIndex::concat(const MultiIndex& other) const {
    MultiIndex out = *this;
    for (std::size_t i = 0; i < other.order_; ++i) out.push_back(other.idx_[i]);
    return out;
}

MultiIndex MultiIndex::sorted() const {
    MultiIndex out = *this;
    std::sort(out.idx_.begin(), out.idx_.begin() + order_);
    return out;
}

bool MultiIndex::is_sorted() const noexcept { return std::is_sorted(idx_.begin(), idx_.begin() + order_); }

std::uint64_t MultiIndex::orbit_size() const {
    const MultiIndex s = sorted();
    std::uint64_t count = 1;
    std::uint64_t run = 0;
    for (std::size_t i = 0; i < order_; ++i) {
        run = (i > 0 && s.idx_[i] == s.idx_[i - 1]) ? run + 1 : 1;
        // order!/prod(mult!) built incrementally; each partial quotient is an integer
        count = count * (i + 1) / run;
    }
    return count;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const noexcept {
    if (auto c = order_ <=> other.order_; c != 0) return c;
    for (std::size_t i = 0; i < order_; ++i) {
        if (auto c = idx_[i] <=> other.idx_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

bool MultiIndex::operator==(const MultiIndex& other) const noexcept {
    return order_ == other.order_ && std::equal(idx_.begin(), idx_.begin() + order_, other.idx_.begin());
}

std::size_t MultiIndexHash::operator()(const MultiIndex& m) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ m.order();
    for (std::size_t i = 0; i < m.order(); ++i) {
        h ^= m[i] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
}

// Tensor ---------------------------------------------------------------------

void Tensor::add(const MultiIndex& idx, double value) {
    if (idx.order() != order_) throw Error(ErrorKind::domain, "index order does not match tensor order");
    coeffs_[idx] += value;
}

double Tensor::at(const MultiIndex& idx) const {
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double Tensor::scalar() const {
    if (order_ != 0) throw Error(ErrorKind::domain, "scalar() on a tensor of positive order");
    return at(MultiIndex{});
}

void Tensor::prune() { std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0.0; }); }

// SparseSymmetricKernel ------------------------------------------------------

void SparseSymmetricKernel::add(const MultiIndex& idx, double value) {
    if (idx.order() != order_) throw Error(ErrorKind::domain, "index order does not match kernel order");
    const MultiIndex key = idx.sorted();
    auto [it, inserted] = coeffs_.try_emplace(key, 0.0);
    it->second += value;
    if (it->second == 0.0) coeffs_.erase(it);
}

double SparseSymmetricKernel::at(const MultiIndex& idx) const {
    auto it = coeffs_.find(idx.sorted());
    return it == coeffs_.end() ? 0.0 : it->second;
}

void SparseSymmetricKernel::scale(double factor) {
    if (factor == 0.0) {
        coeffs_.clear();
        return;
    }
    for (auto& [k, v] : coeffs_) v *= factor;
}

Tensor SparseSymmetricKernel::to_tensor() const {
    Tensor t(order_);
    for (const auto& [key, value] : coeffs_) {
        std::array<std::uint32_t, kMaxTensorOrder> arr{};
        for (std::size_t i = 0; i < order_; ++i) arr[i] = key[i];
        do {
            MultiIndex idx;
            for (std::size_t i = 0; i < order_; ++i) idx.push_back(arr[i]);
            t.add(idx, value);
        } while (std::next_permutation(arr.begin(), arr.begin() + order_));
    }
    return t;
}

// Families -------------------------------------------------------------------

KernelFamily KernelFamily::fgn(int q, double hurst) {
    if (q < 2) throw Error(ErrorKind::domain, "fgn kernel family requires q >= 2");
    if (!(hurst > 0.0 && hurst < 1.0)) throw Error(ErrorKind::domain, "fgn kernel family requires H in (0, 1)");
    return {Kind::fgn, q, hurst};
}

KernelFamily KernelFamily::product() { return {Kind::product, 3, 0.5}; }
KernelFamily KernelFamily::product_reversed() { return {Kind::product_reversed, 3, 0.5}; }

std::string KernelFamily::name() const {
    switch (kind) {
        case Kind::fgn: return "fgn";
        case Kind::product: return "product";
        case Kind::product_reversed: return "product_reversed";
    }
    return "?";
}

std::string KernelFamily::description() const {
    switch (kind) {
        case Kind::fgn:
            return "fGn Hermite variation kernel, q=" + std::to_string(q) + ", H=" + format_double(hurst);
        case Kind::product: return "G_n = X_n (2n)^{-1/2} sum_{j<n} (X_j^2 - 1)";
        case Kind::product_reversed: return "G_n = X_0 (2n)^{-1/2} sum_{1<=j<=n} (X_j^2 - 1)";
    }
    return {};
}

KernelFamily KernelFamily::parse(const std::string& name, int q, double hurst) {
    if (name == "fgn") return fgn(q, hurst);
    if (name == "product") return product();
    if (name == "product_reversed") return product_reversed();
    throw Error(ErrorKind::schema, "unknown kernel family '" + name + "' (expected fgn, product, product_reversed)");
}

SparseSymmetricKernel make_kernel(const KernelFamily& family, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::domain, "kernel index n must be >= 1");
    const auto nn = static_cast<std::uint32_t>(n);
    switch (family.kind) {
        case KernelFamily::Kind::fgn: {
            const BasisGram gram = family.hurst == 0.5 ? BasisGram{GramKind::orthonormal, 0.5}
                                                       : BasisGram{GramKind::toeplitz, family.hurst};
            SparseSymmetricKernel g(static_cast<std::size_t>(family.q), gram);
            const double pref = std::pow(static_cast<double>(n), family.q * (1.0 - family.hurst) - 1.0);
            for (std::uint32_t j = 1; j <= nn; ++j) {
                MultiIndex idx;
                for (int m = 0; m < family.q; ++m) idx.push_back(j);
                g.add(idx, pref);
            }
            return g;
        }
        case KernelFamily::Kind::product:
        case KernelFamily::Kind::product_reversed: {
            // sym(e_a (x) e_j (x) e_j) puts 1/3 on each of its three arrangements.
            SparseSymmetricKernel g(3, BasisGram{});
            const double value = 1.0 / (3.0 * std::sqrt(2.0 * static_cast<double>(n)));
            const bool reversed = family.kind == KernelFamily::Kind::product_reversed;
            for (std::uint32_t j = reversed ? 1 : 0; j < (reversed ? nn + 1 : nn); ++j)
                g.add(MultiIndex{reversed ? 0u : nn, j, j}, value);
            return g;
        }
    }
    throw Error(ErrorKind::domain, "unknown kernel family");
}

// Contractions ---------------------------------------------------------------

Tensor contract(const Tensor& f, const Tensor& g, std::size_t r) {
    if (r > std::min(f.order(), g.order()))
        throw Error(ErrorKind::domain, "contraction order r exceeds the tensor orders");
    const std::size_t fo = f.order() - r;
    const std::size_t go = g.order() - r;
    if (fo + go > kMaxTensorOrder) throw Error(ErrorKind::budget, "contraction result exceeds kMaxTensorOrder");
    std::unordered_map<MultiIndex, std::vector<std::pair<MultiIndex, double>>, MultiIndexHash> by_pair;
    for (const auto& [idx, v] : g.entries()) by_pair[idx.tail_from(go)].emplace_back(idx.head(go), v);
    Tensor out(fo + go);
    for (const auto& [idx, v] : f.entries()) {
        auto it = by_pair.find(idx.tail_from(fo));
        if (it == by_pair.end()) continue;
        const MultiIndex head = idx.head(fo);
        for (const auto& [ghead, gv] : it->second) out.add(head.concat(ghead), v * gv);
    }
    out.prune();
    return out;
}

Tensor contract(const SparseSymmetricKernel& f, const SparseSymmetricKernel& g, std::size_t r) {
    if (f.gram().kind != GramKind::orthonormal || g.gram().kind != GramKind::orthonormal) {
        throw Error(ErrorKind::domain,
                    "tensor contraction needs an orthonormal basis; use fgn_contraction_inner_product for fGn kernels");
    }
    return contract(f.to_tensor(), g.to_tensor(), r);
}

SparseSymmetricKernel symmetrize(const Tensor& t) {
    SparseSymmetricKernel out(t.order(), BasisGram{});
    for (const auto& [idx, v] : t.entries()) out.add(idx, v / static_cast<double>(idx.orbit_size()));
    return out;
}

double inner_product(const Tensor& f, const Tensor& g) {
    if (f.order() != g.order()) throw Error(ErrorKind::domain, "inner product of tensors of different orders");
    const Tensor& small = f.support_size() <= g.support_size() ? f : g;
    const Tensor& large = &small == &f ? g : f;
    double s = 0.0;
    for (const auto& [idx, v] : small.entries()) s += v * large.at(idx);
    return s;
}

double inner_product(const SparseSymmetricKernel& f, const SparseSymmetricKernel& g) {
    if (f.order() != g.order()) throw Error(ErrorKind::domain, "inner product of kernels of different orders");
    if (!(f.gram() == g.gram())) throw Error(ErrorKind::domain, "inner product of kernels with different Gram kinds");
    if (f.gram().kind == GramKind::orthonormal) {
        double s = 0.0;
        for (const auto& [key, v] : f.coeffs()) {
            auto it = g.coeffs().find(key);
            if (it != g.coeffs().end()) s += static_cast<double>(key.orbit_size()) * v * it->second;
        }
        return s;
    }
    const CorrelationFn corr(f.gram().hurst);
    const Tensor ft = f.to_tensor();
    const Tensor gt = g.to_tensor();
    double s = 0.0;
    for (const auto& [i, fv] : ft.entries()) {
        for (const auto& [j, gv] : gt.entries()) {
            double w = fv * gv;
            for (std::size_t m = 0; m < i.order(); ++m)
                w *= corr(static_cast<long long>(i[m]) - static_cast<long long>(j[m]));
            s += w;
        }
    }
    return s;
}

double norm(const Tensor& t) { return std::sqrt(inner_product(t, t)); }

// Closed-form fGn sums -------------------------------------------------------

namespace {

void check_fgn_args(int q, double hurst, std::size_t k, std::size_t l) {
    if (q < 1) throw Error(ErrorKind::domain, "q must be >= 1");
    if (!(hurst > 0.0 && hurst < 1.0)) throw Error(ErrorKind::domain, "Hurst index must lie in (0, 1)");
    if (k == 0 || l == 0) throw Error(ErrorKind::domain, "kernel indices must be >= 1");
}

std::vector<double> powered_lags(const CorrelationFn& corr, std::size_t n, int power) {
    std::vector<double> out(n);
    for (std::size_t a = 0; a < n; ++a) out[a] = std::pow(corr(static_cast<long long>(a)), power);
    return out;
}

}  // namespace

double fgn_contraction_inner_product(int q, double hurst, int r, std::size_t k, std::size_t l,
                                     const QuadSumOptions& options) {
    check_fgn_args(q, hurst, k, l);
    if (r < 0 || r > q) throw Error(ErrorKind::domain, "contraction order must satisfy 0 <= r <= q");
    if (k > l) std::swap(k, l);
    const CorrelationFn corr(hurst);
    const auto pr = powered_lags(corr, l, r);
    const auto pc = powered_lags(corr, l, q - r);
    auto lag = [](std::size_t a, std::size_t b) { return a > b ? a - b : b - a; };
    double sum = 0.0;
    if (options.algorithm == QuadSumAlgorithm::literal) {
        if (l > options.literal_budget) {
            throw Error(ErrorKind::budget, "literal quadruple sum over k, l <= " + std::to_string(options.literal_budget) +
                                               " only; select QuadSumAlgorithm::compressed");
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t ip = 0; ip < l; ++ip)
                    for (std::size_t jp = 0; jp < l; ++jp)
                        sum += pr[lag(i, j)] * pr[lag(ip, jp)] * pc[lag(i, ip)] * pc[lag(j, jp)];
    } else {
        if (l > options.compressed_budget)
            throw Error(ErrorKind::budget, "compressed quadruple sum budget exceeded (k, l <= " +
                                               std::to_string(options.compressed_budget) + ")");
        const auto kk = static_cast<Eigen::Index>(k);
        const auto ll = static_cast<Eigen::Index>(l);
        Eigen::MatrixXd a(kk, kk), b(ll, ll), c(kk, ll);
        for (Eigen::Index i = 0; i < kk; ++i)
            for (Eigen::Index j = 0; j < kk; ++j) a(i, j) = pr[lag(i, j)];
        for (Eigen::Index i = 0; i < ll; ++i)
            for (Eigen::Index j = 0; j < ll; ++j) b(i, j) = pr[lag(i, j)];
        for (Eigen::Index i = 0; i < kk; ++i)
            for (Eigen::Index j = 0; j < ll; ++j) c(i, j) = pc[lag(i, j)];
        // sum_{i,j,i',j'} A_ij C_ii' B_i'j' C_jj' = tr(A C B C^T)
        Eigen::MatrixXd acb = a * c * b;
        sum = acb.cwiseProduct(c).sum();
    }
    const double expo = 2.0 * (q * (1.0 - hurst) - 1.0);
    return std::pow(static_cast<double>(k) * static_cast<double>(l), expo) * sum;
}

double kernel_inner_product_fgn(int q, double hurst, std::size_t k, std::size_t l) {
    check_fgn_args(q, hurst, k, l);
    if (k > l) std::swap(k, l);
    const CorrelationFn corr(hurst);
    // d = i - j; the number of pairs with 1 <= i <= k, 1 <= j <= l at lag d
    double sum = 0.0;
    const auto kk = static_cast<long long>(k);
    const auto ll = static_cast<long long>(l);
    for (long long d = -(ll - 1); d <= kk - 1; ++d) {
        const long long lo = std::max(1LL, 1 + d);
        const long long hi = std::min(kk, ll + d);
        if (hi >= lo) sum += static_cast<double>(hi - lo + 1) * std::pow(corr(d), q);
    }
    return std::pow(static_cast<double>(k) * static_cast<double>(l), q * (1.0 - hurst) - 1.0) * sum;
}

double product_contraction_closed_form(int r, std::size_t k, std::size_t l) {
    if (k == 0 || l == 0) throw Error(ErrorKind::domain, "kernel indices must be >= 1");
    const double m = static_cast<double>(std::min(k, l));
    const double kl = static_cast<double>(k) * static_cast<double>(l);
    switch (r) {
        case 0: return m * m / (36.0 * kl);
        case 1: return (4.0 * m + m * m) / (324.0 * kl);
        case 2: return 5.0 * m / (324.0 * kl);
        default: throw Error(ErrorKind::domain, "closed forms exist for r = 0, 1, 2 only");
    }
}

nlohmann::json kernel_to_json(const SparseSymmetricKernel& kernel) {
    nlohmann::json j;
    j["order"] = kernel.order();
    j["gram"] = kernel.gram().kind == GramKind::orthonormal ? "orthonormal" : "toeplitz";
    if (kernel.gram().kind == GramKind::toeplitz) j["hurst"] = kernel.gram().hurst;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, v] : kernel.coeffs()) {
        nlohmann::json idx = nlohmann::json::array();
        for (std::size_t i = 0; i < key.order(); ++i) idx.push_back(key[i]);
        entries.push_back({{"index", idx}, {"value", v}, {"orbit", key.orbit_size()}});
    }
    j["entries"] = std::move(entries);
    return j;
}

}  // namespace aslt
