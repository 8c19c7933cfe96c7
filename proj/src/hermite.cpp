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

#include "aslt/hermite.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "aslt/error.hpp"

namespace aslt {

ChaosOrder::ChaosOrder(int q) : q_(q) {
    if (q < 1) throw Error(ErrorKind::domain, "chaos order must be >= 1, got " + std::to_string(q));
}

double hermite_eval(int degree, double x) {
    if (degree < 0) throw Error(ErrorKind::domain, "Hermite degree must be >= 0");
    if (degree == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < degree; ++k) {
        const double next = x * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> hermite_all(int max_degree, double x) {
    if (max_degree < 0) throw Error(ErrorKind::domain, "Hermite degree must be >= 0");
    std::vector<double> h(static_cast<std::size_t>(max_degree) + 1);
    h[0] = 1.0;
    if (max_degree >= 1) h[1] = x;
    for (int k = 1; k < max_degree; ++k) h[k + 1] = x * h[k] - k * h[k - 1];
    return h;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t acc = 1;
    for (int i = 1; i <= k; ++i) {
        // acc * (n - k + i) / i is integral; cancel the gcd first so the product cannot overflow early
        const auto d = static_cast<std::uint64_t>(i);
        const std::uint64_t g = std::gcd(acc, d);
        const std::uint64_t t = static_cast<std::uint64_t>(n - k + i) / (d / g);
        if (acc / g > UINT64_MAX / t) throw Error(ErrorKind::domain, "binomial coefficient overflows 64 bits");
        acc = acc / g * t;
    }
    return acc;
}

double factorial(int n) {
    if (n < 0) throw Error(ErrorKind::domain, "factorial of a negative number");
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::vector<ProductTerm> product_formula_coeffs(ChaosOrder p, ChaosOrder q) {
    const int top = std::min(p.value(), q.value());
    std::vector<ProductTerm> out;
    out.reserve(static_cast<std::size_t>(top) + 1);
    std::uint64_t r_fact = 1;
    for (int r = 0; r <= top; ++r) {
        if (r > 0 && __builtin_mul_overflow(r_fact, static_cast<std::uint64_t>(r), &r_fact))
            throw Error(ErrorKind::domain, "product formula coefficient overflows 64 bits");
        std::uint64_t c = 0;
        if (__builtin_mul_overflow(r_fact, binomial(p, r), &c) || __builtin_mul_overflow(c, binomial(q, r), &c))
            throw Error(ErrorKind::domain, "product formula coefficient overflows 64 bits");
        out.push_back({r, c});
    }
    return out;
}

double hermite_covariance(ChaosOrder q, double rho) {
    if (!(std::abs(rho) <= 1.0)) throw Error(ErrorKind::domain, "correlation must satisfy |rho| <= 1");
    return factorial(q) * std::pow(rho, q.value());
}

}  // namespace aslt
