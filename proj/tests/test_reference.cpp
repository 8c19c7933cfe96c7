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
#include <numbers>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "aslt/error.hpp"
#include "aslt/reference.hpp"

namespace {

using aslt::ReferenceDistribution;

// P(XY <= x) = 2 int_0^inf phi(y) Phi(x / y) dy by composite Simpson on y = u / (1 - u).
double product_cdf_oracle(double x) {
    const int n = 200000;
    const double h = 1.0 / n;
    // u = 0 endpoint: phi(0) times the limit of Phi(x / y) as y -> 0+
    double s = (x > 0.0 ? 1.0 : x < 0.0 ? 0.0 : 0.5) / std::sqrt(2.0 * std::numbers::pi);
    for (int i = 1; i < n; ++i) {
        const double u = i * h;
        const double y = u / (1.0 - u);
        const double jac = 1.0 / ((1.0 - u) * (1.0 - u));
        const double f = std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi) * aslt::normal_cdf(x / y) * jac;
        s += (i % 2 ? 4.0 : 2.0) * f;
    }
    return 2.0 * s * h / 3.0;
}

TEST(NormalCdf, Values) {
    EXPECT_NEAR(aslt::normal_cdf(1.96), 0.97500210485177956379, 1e-15);
    EXPECT_DOUBLE_EQ(aslt::normal_cdf(0.0), 0.5);
    EXPECT_NEAR(aslt::normal_cdf(-1.96), 1.0 - 0.97500210485177956379, 1e-15);
}

TEST(ProductNormalCdf, FrozenValues) {
    const std::vector<std::pair<double, double>> table = {
        {0.25, 0.7002991662384914253}, {0.5, 0.79510589791829947033}, {1.0, 0.89550316849767383628},
        {2.0, 0.96908555526220387865}, {2.5, 0.98267678713521234268}, {3.0, 0.99018070127845310944},
        {5.0, 0.99891490194865483522}, {8.0, 0.99995580537620167031},
    };
    for (const auto& [x, want] : table) {
        EXPECT_NEAR(aslt::product_normal_cdf(x), want, 1e-13) << x;
        EXPECT_NEAR(aslt::product_normal_cdf(-x), 1.0 - want, 1e-13) << x;
    }
    EXPECT_DOUBLE_EQ(aslt::product_normal_cdf(0.0), 0.5);
    EXPECT_DOUBLE_EQ(aslt::product_normal_cdf(60.0), 1.0);
}

TEST(ProductNormalCdf, MixtureOracle) {
    for (double x : {-3.0, -0.7, 0.1, 1.5, 2.0, 4.0}) EXPECT_NEAR(aslt::product_normal_cdf(x), product_cdf_oracle(x), 1e-7);
}

TEST(ProductNormalCdf, MonotoneAcrossBranches) {
    double prev = aslt::product_normal_cdf(1.9);
    for (double x = 1.9; x <= 12.0; x += 0.01) {
        const double c = aslt::product_normal_cdf(x);
        EXPECT_GE(c, prev);
        prev = c;
    }
}

TEST(Reference, AnalyticMoments) {
    const auto n = ReferenceDistribution::std_normal();
    const auto p = ReferenceDistribution::product_normal();
    EXPECT_NEAR(n.abs_first_moment(), std::sqrt(2.0 / std::numbers::pi), 1e-14);
    EXPECT_NEAR(p.abs_first_moment(), 2.0 / std::numbers::pi, 1e-14);
    EXPECT_NEAR(n.antiderivative(0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(p.antiderivative(0.0), 1.0 / std::numbers::pi, 1e-15);
    EXPECT_NEAR(p.antiderivative(3.0) - p.antiderivative(-3.0), 3.0, 1e-12);
}

TEST(Reference, ProductCdfIntegralFrozenValues) {
    // int_0^b F = b/2 + (b G(b) + b K_1(b) - 1) / pi, evaluated with mpmath
    const auto p = ReferenceDistribution::product_normal();
    const std::vector<std::pair<double, double>> table = {
        {0.5, 0.34287385496455979008}, {2.0, 1.7089026101846426279},
        {3.5, 3.1868204568404533538}, {7.0, 6.6818107251987419342}};
    for (const auto& [b, want] : table) EXPECT_NEAR(p.cdf_integral(0.0, b), want, 1e-13) << b;
}

TEST(Reference, CharacteristicFunctions) {
    const auto n = ReferenceDistribution::std_normal();
    const auto p = ReferenceDistribution::product_normal();
    EXPECT_NEAR(n.charfn(1.3).real(), std::exp(-0.845), 1e-15);
    EXPECT_NEAR(p.charfn(2.0).real(), 1.0 / std::sqrt(5.0), 1e-15);
    const auto s = n.scaled(2.0);
    EXPECT_NEAR(s.charfn(0.5).real(), std::exp(-0.5), 1e-15);
    EXPECT_NEAR(s.cdf(1.0), aslt::normal_cdf(0.5), 1e-15);
}

TEST(Reference, TableCdf) {
    const auto t = ReferenceDistribution::from_table(ReferenceDistribution::Kind::custom_table, {0.25, 0.5, 1.0},
                                                     {-1.0, 0.0, 2.0});
    EXPECT_EQ(t.cdf(-1.5), 0.0);
    EXPECT_EQ(t.cdf_left(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(t.cdf(-1.0), 0.25);
    EXPECT_DOUBLE_EQ(t.cdf(-0.5), 0.375);
    EXPECT_DOUBLE_EQ(t.cdf(1.0), 0.75);
    EXPECT_DOUBLE_EQ(t.cdf_left(2.0), 1.0);
    EXPECT_EQ(t.cdf(2.0), 1.0);
    // mean = 2 - int_{-1}^{2} F = 2 - (0.375 + 1.5)
    EXPECT_DOUBLE_EQ(t.mean(), 0.125);
    EXPECT_DOUBLE_EQ(t.antiderivative(3.0), 1.875 + 1.0);
    EXPECT_DOUBLE_EQ(t.cdf_integral(-1.0, 0.0), 0.375);
}

TEST(Reference, TableWithTiesHasJump) {
    const auto t = ReferenceDistribution::from_table(ReferenceDistribution::Kind::custom_table, {0.2, 0.6, 1.0},
                                                     {0.0, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(t.cdf(1.0), 1.0);
    EXPECT_DOUBLE_EQ(t.cdf_left(1.0), 0.6);
}

TEST(Reference, PointMass) {
    const auto pm = ReferenceDistribution::point_mass(0.5);
    EXPECT_EQ(pm.cdf(0.49), 0.0);
    EXPECT_EQ(pm.cdf(0.5), 1.0);
    EXPECT_EQ(pm.cdf_left(0.5), 0.0);
    EXPECT_DOUBLE_EQ(pm.mean(), 0.5);
    EXPECT_DOUBLE_EQ(pm.abs_first_moment(), 0.5);
}

TEST(Reference, TableValidation) {
    using K = ReferenceDistribution::Kind;
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const aslt::Error& e) {
            return e.kind();
        }
        return aslt::ErrorKind::domain;
    };
    EXPECT_EQ(kind_of([&] { ReferenceDistribution::from_table(K::custom_table, {0.5, 1.0}, {1.0, 0.0}); }),
              aslt::ErrorKind::format);
    EXPECT_EQ(kind_of([&] { ReferenceDistribution::from_table(K::custom_table, {0.5, 0.5}, {0.0, 1.0}); }),
              aslt::ErrorKind::format);
    EXPECT_EQ(kind_of([&] { ReferenceDistribution::from_table(K::custom_table, {0.0, 1.0}, {0.0, 1.0}); }),
              aslt::ErrorKind::format);
    EXPECT_EQ(kind_of([&] { ReferenceDistribution::from_table(K::custom_table, {1.0}, {}); }), aslt::ErrorKind::format);
}

TEST(Reference, FromSamplesSorts) {
    const auto t = ReferenceDistribution::from_samples({3.0, 1.0, 2.0, 0.0});
    EXPECT_EQ(t.quantiles(), (std::vector<double>{0.0, 1.0, 2.0, 3.0}));
    EXPECT_DOUBLE_EQ(t.probabilities().front(), 0.125);
    EXPECT_DOUBLE_EQ(t.probabilities().back(), 0.875);
    const auto s = t.scaled(2.0);
    EXPECT_DOUBLE_EQ(s.quantiles().back(), 6.0);
    EXPECT_DOUBLE_EQ(s.metadata()["scale"].get<double>(), 2.0);
}

TEST(ReferenceIo, RoundTrip) {
    const auto t = ReferenceDistribution::from_samples({0.1, -0.30000000000000004, 2.5e-17, 7.0},
                                                       ReferenceDistribution::Kind::hermite_table, {{"q", 2}});
    std::stringstream ss;
    aslt::save_reference(t, ss);
    const auto back = aslt::load_reference(ss);
    EXPECT_EQ(back.kind(), ReferenceDistribution::Kind::hermite_table);
    EXPECT_EQ(back.quantiles(), t.quantiles());
    EXPECT_EQ(back.probabilities(), t.probabilities());
    EXPECT_EQ(back.metadata()["q"], 2);
}

TEST(ReferenceIo, DetectsCorruption) {
    const auto t = ReferenceDistribution::from_samples({0.0, 1.0, 2.0});
    std::stringstream ss;
    aslt::save_reference(t, ss);
    const std::string text = ss.str();

    auto load_kind = [](const std::string& s) {
        std::istringstream in(s);
        try {
            aslt::load_reference(in);
        } catch (const aslt::Error& e) {
            return e.kind();
        }
        return aslt::ErrorKind::domain;
    };
    EXPECT_EQ(load_kind(text.substr(0, text.size() / 2)), aslt::ErrorKind::format);
    std::string flipped = text;
    flipped[flipped.find("p,quantile") + 11] ^= 1;
    EXPECT_EQ(load_kind(flipped), aslt::ErrorKind::format);
    std::string nosum = text.substr(0, text.rfind("#checksum="));
    EXPECT_EQ(load_kind(nosum), aslt::ErrorKind::format);
    EXPECT_THROW(aslt::save_reference(ReferenceDistribution::std_normal(), ss), aslt::Error);
}

TEST(HermiteReference, SmallBuildIsStandardizedAndSkewed) {
    aslt::HermiteReferenceConfig cfg;
    cfg.hurst = 0.9;
    cfg.q = 2;
    cfg.n = 256;
    cfg.replicates = 4000;
    cfg.seed = 11;
    const auto ref = aslt::build_hermite_reference(cfg);
    const auto& v = ref.quantiles();
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (double x : v) m1 += x;
    m1 /= static_cast<double>(v.size());
    for (double x : v) {
        m2 += (x - m1) * (x - m1);
        m3 += (x - m1) * (x - m1) * (x - m1);
    }
    m2 /= static_cast<double>(v.size());
    m3 /= static_cast<double>(v.size());
    EXPECT_NEAR(m1, 0.0, 0.08);
    EXPECT_NEAR(m2, 1.0, 0.1);
    EXPECT_GT(m3 / std::pow(m2, 1.5), 0.5);
    EXPECT_EQ(ref.metadata()["q"], 2);
    EXPECT_EQ(ref.metadata()["replicates"], 4000);

    const auto again = aslt::build_hermite_reference(cfg);
    EXPECT_EQ(again.quantiles(), ref.quantiles());
}

TEST(HermiteReference, RegimeCheck) {
    aslt::HermiteReferenceConfig cfg;
    cfg.hurst = 0.7;
    cfg.q = 2;
    cfg.n = 64;
    cfg.replicates = 10;
    try {
        aslt::build_hermite_reference(cfg);
        FAIL() << "expected regime error";
    } catch (const aslt::Error& e) {
        EXPECT_EQ(e.kind(), aslt::ErrorKind::regime);
    }
}

}  // namespace
