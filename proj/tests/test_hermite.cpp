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

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "aslt/error.hpp"
#include "aslt/hermite.hpp"
#include "aslt/rng.hpp"

namespace {

using aslt::ChaosOrder;

// Explicit sum n! sum_m (-1)^m x^{n-2m} / (m! (n-2m)! 2^m).
double hermite_explicit(int n, double x) {
    double s = 0.0;
    for (int m = 0; 2 * m <= n; ++m) {
        s += std::pow(-1.0, m) * std::pow(x, n - 2 * m) /
             (aslt::factorial(m) * aslt::factorial(n - 2 * m) * std::pow(2.0, m));
    }
    return aslt::factorial(n) * s;
}

// Golub-Welsch nodes and weights for the standard normal weight.
void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = std::sqrt(static_cast<double>(i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()(i);
        w[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
}

TEST(Hermite, SmallDegreeValues) {
    EXPECT_EQ(aslt::hermite_eval(0, 7.3), 1.0);
    EXPECT_EQ(aslt::hermite_eval(2, 1.0), 0.0);
    EXPECT_EQ(aslt::hermite_eval(3, 2.0), 2.0);
    EXPECT_EQ(aslt::hermite_eval(1, -0.25), -0.25);
}

TEST(Hermite, RecurrenceMatchesExplicitSum) {
    for (int q = 0; q <= 8; ++q) {
        for (double x = -4.0; x <= 4.0; x += 0.37) {
            const double want = hermite_explicit(q, x);
            EXPECT_NEAR(aslt::hermite_eval(q, x), want, 1e-10 * std::max(1.0, std::abs(want))) << q << " " << x;
        }
    }
}

TEST(Hermite, AllDegreesAgreeWithSingleEvaluation) {
    const auto h = aslt::hermite_all(7, 1.3);
    ASSERT_EQ(h.size(), 8u);
    for (int q = 0; q <= 7; ++q) EXPECT_EQ(h[q], aslt::hermite_eval(q, 1.3));
}

TEST(Hermite, OrthogonalityUnderGaussianWeight) {
    std::vector<double> x, w;
    gauss_hermite(20, x, w);
    for (int p = 0; p <= 6; ++p) {
        for (int q = 0; q <= 6; ++q) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * aslt::hermite_eval(p, x[i]) * aslt::hermite_eval(q, x[i]);
            EXPECT_NEAR(s, p == q ? aslt::factorial(q) : 0.0, 1e-8) << p << "," << q;
        }
    }
}

TEST(Hermite, ProductFormulaCoefficients) {
    using T = aslt::ProductTerm;
    EXPECT_EQ(aslt::product_formula_coeffs(ChaosOrder(1), ChaosOrder(1)), (std::vector<T>{{0, 1}, {1, 1}}));
    EXPECT_EQ(aslt::product_formula_coeffs(ChaosOrder(3), ChaosOrder(3)),
              (std::vector<T>{{0, 1}, {1, 9}, {2, 18}, {3, 6}}));
    EXPECT_EQ(aslt::product_formula_coeffs(ChaosOrder(2), ChaosOrder(2)), (std::vector<T>{{0, 1}, {1, 4}, {2, 2}}));
    for (int p = 1; p <= 8; ++p)
        for (int q = 1; q <= 8; ++q)
            EXPECT_EQ(aslt::product_formula_coeffs(ChaosOrder(p), ChaosOrder(q)),
                      aslt::product_formula_coeffs(ChaosOrder(q), ChaosOrder(p)));
}

TEST(Hermite, ProductFormulaOverflowIsReported) {
    EXPECT_NO_THROW(aslt::product_formula_coeffs(ChaosOrder(12), ChaosOrder(12)));
    EXPECT_THROW(aslt::product_formula_coeffs(ChaosOrder(40), ChaosOrder(40)), aslt::Error);
}

TEST(Hermite, ChaosOrderRejectsZero) { EXPECT_THROW(ChaosOrder(0), aslt::Error); }

TEST(Hermite, CovarianceValues) {
    EXPECT_DOUBLE_EQ(aslt::hermite_covariance(ChaosOrder(1), 0.3), 0.3);
    EXPECT_DOUBLE_EQ(aslt::hermite_covariance(ChaosOrder(2), 1.0), 2.0);
    EXPECT_DOUBLE_EQ(aslt::hermite_covariance(ChaosOrder(3), 0.5), 0.75);
    EXPECT_THROW(aslt::hermite_covariance(ChaosOrder(2), 1.01), aslt::Error);
}

TEST(Hermite, CovarianceMatchesTwoDimensionalQuadrature) {
    std::vector<double> x, w;
    gauss_hermite(24, x, w);
    const double rho = 0.5;
    const double s = std::sqrt(1.0 - rho * rho);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            acc += w[i] * w[j] * aslt::hermite_eval(3, x[i]) * aslt::hermite_eval(3, rho * x[i] + s * x[j]);
    EXPECT_NEAR(acc, 0.75, 1e-10);
}

TEST(Hermite, CovarianceMatchesMonteCarlo) {
    aslt::NormalStream z(2024);
    const double rho = 0.6;
    const int m = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < m; ++i) {
        const double a = z();
        const double b = rho * a + std::sqrt(1.0 - rho * rho) * z();
        const double v = aslt::hermite_eval(2, a) * aslt::hermite_eval(2, b);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / m;
    const double se = std::sqrt((sumsq / m - mean * mean) / m);
    EXPECT_NEAR(mean, aslt::hermite_covariance(ChaosOrder(2), rho), 4.0 * se);
}

TEST(Hermite, Binomial) {
    EXPECT_EQ(aslt::binomial(5, 2), 10u);
    EXPECT_EQ(aslt::binomial(62, 31), 465428353255261088ULL);
    EXPECT_EQ(aslt::binomial(4, 5), 0u);
    EXPECT_THROW(aslt::binomial(80, 40), aslt::Error);
}

}  // namespace
