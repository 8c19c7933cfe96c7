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

#include <cstdint>
#include <vector>

namespace aslt {

/// Order of a Wiener chaos (equivalently, degree of the Hermite polynomial).
class ChaosOrder {
public:
    explicit ChaosOrder(int q);

    int value() const noexcept { return q_; }
    operator int() const noexcept { return q_; }

private:
    int q_;
};

/// Probabilists' Hermite polynomial H_degree(x) via the three-term recurrence
/// H_{k+1}(x) = x H_k(x) - k H_{k-1}(x), with H_0 = 1 and H_1 = x.
double hermite_eval(int degree, double x);

/// Evaluates H_0(x), ..., H_max_degree(x) in one pass.
std::vector<double> hermite_all(int max_degree, double x);

struct ProductTerm {
    int r;
    std::uint64_t coeff;  ///< r! * C(p, r) * C(q, r), exact

    bool operator==(const ProductTerm&) const = default;
};

/// Coefficients of the chaos expansion of I_p(f) I_q(g): the term of order
/// p + q - 2r carries r! C(p,r) C(q,r). Throws ErrorKind::domain on overflow.
std::vector<ProductTerm> product_formula_coeffs(ChaosOrder p, ChaosOrder q);

/// E[H_q(X) H_q(Y)] = q! rho^q for a standard normal pair with correlation rho.
double hermite_covariance(ChaosOrder q, double rho);

/// n! as a double (exact for n <= 22).
double factorial(int n);

/// Exact binomial coefficient; throws ErrorKind::domain on 64-bit overflow.
std::uint64_t binomial(int n, int k);

}  // namespace aslt
