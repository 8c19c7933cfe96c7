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

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace aslt {

inline constexpr std::size_t kMaxTensorOrder = 12;

/// Index tuple (i_1, ..., i_order) into the tensor power of the basis.
class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<std::uint32_t> idx);

    std::size_t order() const noexcept { return order_; }
    std::uint32_t operator[](std::size_t i) const noexcept { return idx_[i]; }
    std::uint32_t& operator[](std::size_t i) noexcept { return idx_[i]; }

    void push_back(std::uint32_t v);

    /// First `count` entries / entries from `start` onward.
    MultiIndex head(std::size_t count) const;
    MultiIndex tail_from(std::size_t start) const;
    MultiIndex concat(const MultiIndex& other) const;

    MultiIndex sorted() const;
    bool is_sorted() const noexcept;

    /// Number of distinct rearrangements: order! / prod(multiplicity!).
    std::uint64_t orbit_size() const;

    std::strong_ordering operator<=>(const MultiIndex& other) const noexcept;
    bool operator==(const MultiIndex& other) const noexcept;

private:
    std::array<std::uint32_t, kMaxTensorOrder> idx_{};
    std::uint8_t order_ = 0;
};

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& m) const noexcept;
};

/// General (not necessarily symmetric) finitely supported tensor over an
/// orthonormal basis. Order 0 holds a scalar at the empty index.
class Tensor {
public:
    explicit Tensor(std::size_t order) : order_(order) {}

    std::size_t order() const noexcept { return order_; }
    std::size_t support_size() const noexcept { return coeffs_.size(); }

    void add(const MultiIndex& idx, double value);
    double at(const MultiIndex& idx) const;

    /// Value of an order-0 tensor.
    double scalar() const;

    const std::unordered_map<MultiIndex, double, MultiIndexHash>& entries() const noexcept { return coeffs_; }

    /// Drops exact zeros.
    void prune();

private:
    std::size_t order_;
    std::unordered_map<MultiIndex, double, MultiIndexHash> coeffs_;
};

enum class GramKind { orthonormal, toeplitz };

/// Gram matrix of the indicator basis: identity, or rho(H, i - j) for fGn.
struct BasisGram {
    GramKind kind = GramKind::orthonormal;
    double hurst = 0.5;

    bool operator==(const BasisGram&) const = default;
};

/// Symmetric tensor stored once per orbit: sorted index tuple -> value of
/// the tensor at every rearrangement of that tuple. No explicit zeros.
class SparseSymmetricKernel {
public:
    SparseSymmetricKernel(std::size_t order, BasisGram gram) : order_(order), gram_(gram) {}

    std::size_t order() const noexcept { return order_; }
    const BasisGram& gram() const noexcept { return gram_; }
    const std::map<MultiIndex, double>& coeffs() const noexcept { return coeffs_; }

    /// Adds `value` at the orbit of `idx` (sorted internally).
    void add(const MultiIndex& idx, double value);
    double at(const MultiIndex& idx) const;

    void scale(double factor);

    /// Expands every orbit into explicit coordinates. Orthonormal Gram only.
    Tensor to_tensor() const;

private:
    std::size_t order_;
    BasisGram gram_;
    std::map<MultiIndex, double> coeffs_;
};

/// Kernel families driving the experiments.
///   fgn              g_n = n^{q(1-H)-1} sum_{j=1..n} e_j^{(x)q}, Gram rho(H, .)
///   product          g_n = (2n)^{-1/2} sum_{j=0..n-1} sym(e_n (x) e_j (x) e_j)
///   product_reversed g_n = (2n)^{-1/2} sum_{j=1..n}   sym(e_0 (x) e_j (x) e_j)
/// The product families realize G_n = X_n (2n)^{-1/2} sum_{j<n} (X_j^2 - 1) and
/// its reversed variant X_0 (2n)^{-1/2} sum_{1<=j<=n} (X_j^2 - 1).
struct KernelFamily {
    enum class Kind { fgn, product, product_reversed };

    Kind kind = Kind::fgn;
    int q = 2;
    double hurst = 0.5;

    static KernelFamily fgn(int q, double hurst);
    static KernelFamily product();
    static KernelFamily product_reversed();

    /// Chaos order of every member (3 for the product families).
    int order() const noexcept { return kind == Kind::fgn ? q : 3; }
    bool orthonormal() const noexcept { return kind != Kind::fgn || hurst == 0.5; }

    std::string description() const;
    std::string name() const;
    static KernelFamily parse(const std::string& name, int q, double hurst);
};

SparseSymmetricKernel make_kernel(const KernelFamily& family, std::size_t n);

/// f (x)_r g pairing the last r slots of f with the last r slots of g;
/// the result is indexed (f remainder, g remainder). Orthonormal Gram only.
Tensor contract(const Tensor& f, const Tensor& g, std::size_t r);
Tensor contract(const SparseSymmetricKernel& f, const SparseSymmetricKernel& g, std::size_t r);

/// Average over all index permutations, in canonical storage.
SparseSymmetricKernel symmetrize(const Tensor& t);

double inner_product(const Tensor& f, const Tensor& g);

/// Orbit-weighted inner product. For toeplitz Gram kernels the full Gram
/// pairing sum_{I,J} f_I g_J prod_m rho(i_m - j_m) is evaluated literally,
/// which is only meant for small kernels.
double inner_product(const SparseSymmetricKernel& f, const SparseSymmetricKernel& g);

double norm(const Tensor& t);

enum class QuadSumAlgorithm { literal, compressed };

struct QuadSumOptions {
    QuadSumAlgorithm algorithm = QuadSumAlgorithm::compressed;
    std::size_t literal_budget = 512;
    std::size_t compressed_budget = 8192;
};

/// <g_k (x)_r g_k, g_l (x)_r g_l> for the fgn family:
///   (kl)^{2(q(1-H)-1)} sum_{i,j<=k} sum_{i',j'<=l}
///       rho(i-j)^r rho(i'-j')^r rho(i-i')^{q-r} rho(j-j')^{q-r}.
/// The compressed path evaluates tr(A C B C^T) with Toeplitz factors in
/// O(kl(k+l)); arguments are canonicalized to k <= l so the result is
/// exactly symmetric.
double fgn_contraction_inner_product(int q, double hurst, int r, std::size_t k, std::size_t l,
                                     const QuadSumOptions& options = {});

/// <g_k, g_l> for the fgn family, (kl)^{q(1-H)-1} sum_{i<=k, j<=l} rho(i-j)^q, by lag counting.
double kernel_inner_product_fgn(int q, double hurst, std::size_t k, std::size_t l);

/// Closed forms stated for <g_k (x)_r g_k, g_l (x)_r g_l> of the product
/// families, m = min(k, l): m^2/(36kl), (4m + m^2)/(324kl), 5m/(324kl) for
/// r = 0, 1, 2. The tensor oracle confirms r = 0, 1 for product_reversed
/// only; see kernels_check.
double product_contraction_closed_form(int r, std::size_t k, std::size_t l);

/// Debug dump: order, gram kind, canonical entries. Not a stable format.
nlohmann::json kernel_to_json(const SparseSymmetricKernel& kernel);

}  // namespace aslt
