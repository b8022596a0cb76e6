#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "sndc/error.hpp"
#include "sndc/gauss_rule.hpp"

namespace sndc {
namespace {

using boost::math::quadrature::gauss_kronrod;

/// Reference expectation under the uniform density on [-1, 1].
template <typename F>
double uniform_mean(F f) {
    return 0.5 * gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 15, 1e-15);
}

/// Reference expectation under the standard normal density.
template <typename F>
double normal_mean(F f) {
    auto g = [&](double y) { return f(y) * std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi); };
    return gauss_kronrod<double, 61>::integrate(g, -40.0, 40.0, 15, 1e-15);
}

double apply(const GaussRule1D& rule, auto f) {
    double sum = 0.0;
    for (int j = 0; j < rule.size(); ++j) sum += rule.weights[j] * f(rule.nodes[j]);
    return sum;
}

TEST(GaussRule, TwoPointLegendreMatchesMoments) {
    // Two symmetric nodes with equal weights matching E[1] = 1 and E[y^2] = 1/3.
    const GaussRule1D rule = gauss_rule(GaussFamily::LegendreUniform, 2);
    EXPECT_NEAR(rule.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(rule.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(rule.weights[0], 0.5, 1e-15);
    EXPECT_NEAR(rule.weights[1], 0.5, 1e-15);
    for (int a = 0; a <= 3; ++a) {
        EXPECT_NEAR(apply(rule, [a](double y) { return std::pow(y, a); }), a % 2 ? 0.0 : 1.0 / (a + 1), 1e-15);
    }
}

TEST(GaussRule, TwoPointHermiteMatchesMoments) {
    // E[y^2] = 1 for the standard normal, so the nodes are +-1.
    const GaussRule1D rule = gauss_rule(GaussFamily::HermiteNormal, 2);
    EXPECT_NEAR(rule.nodes[0], -1.0, 1e-15);
    EXPECT_NEAR(rule.nodes[1], 1.0, 1e-15);
    EXPECT_NEAR(rule.weights[0], 0.5, 1e-15);
    EXPECT_NEAR(rule.weights[1], 0.5, 1e-15);
}

TEST(GaussRule, SinglePointIsTheMean) {
    for (GaussFamily family : {GaussFamily::LegendreUniform, GaussFamily::HermiteNormal}) {
        const GaussRule1D rule = gauss_rule(family, 1);
        ASSERT_EQ(rule.size(), 1);
        EXPECT_EQ(rule.nodes[0], 0.0);
        EXPECT_EQ(rule.weights[0], 1.0);
    }
    Recurrence shifted;
    shifted.alpha = {0.3};
    shifted.beta = {1.0};
    const GaussRule1D rule = gauss_rule(shifted, 1);
    EXPECT_DOUBLE_EQ(rule.nodes[0], 0.3);
    EXPECT_DOUBLE_EQ(rule.weights[0], 1.0);
}

TEST(GaussRule, ExactnessAgainstIndependentQuadrature) {
    for (int count = 1; count <= 12; ++count) {
        const GaussRule1D legendre = gauss_rule(GaussFamily::LegendreUniform, count);
        const GaussRule1D hermite = gauss_rule(GaussFamily::HermiteNormal, count);
        for (int a = 0; a <= 2 * count - 1; ++a) {
            // Odd moments vanish, so errors are measured against the scale E|y|^a.
            auto mono = [a](double y) { return std::pow(y, a); };
            auto abs_mono = [a](double y) { return std::pow(std::abs(y), a); };
            EXPECT_NEAR(apply(legendre, mono), uniform_mean(mono), 1e-13 * uniform_mean(abs_mono)) << count << " " << a;
            EXPECT_NEAR(apply(hermite, mono), normal_mean(mono), 1e-12 * normal_mean(abs_mono)) << count << " " << a;
        }
    }
}

TEST(GaussRule, WeightsPositiveSumToOneNodesOrdered) {
    for (int count : {1, 2, 5, 17, 40, kMaxGaussPoints}) {
        for (GaussFamily family : {GaussFamily::LegendreUniform, GaussFamily::HermiteNormal}) {
            const GaussRule1D rule = gauss_rule(family, count);
            EXPECT_NEAR(rule.weights.sum(), 1.0, 1e-13);
            for (int j = 0; j < count; ++j) {
                EXPECT_GT(rule.weights[j], 0.0);
                if (j > 0) EXPECT_LT(rule.nodes[j - 1], rule.nodes[j]);
                EXPECT_EQ(rule.nodes[j], -rule.nodes[count - 1 - j]);  // symmetric densities
            }
            if (family == GaussFamily::LegendreUniform) {
                EXPECT_GT(rule.nodes[0], -1.0);
                EXPECT_LT(rule.nodes[count - 1], 1.0);
            }
        }
    }
}

TEST(GaussRule, WeightsEqualLagrangeIntegrals) {
    for (int count : {3, 6}) {
        const GaussRule1D rule = gauss_rule(GaussFamily::LegendreUniform, count);
        for (int j = 0; j < count; ++j) {
            const double integral = uniform_mean([&](double y) { return lagrange_1d(rule.nodes, j, y); });
            const double square = uniform_mean([&](double y) { return std::pow(lagrange_1d(rule.nodes, j, y), 2); });
            EXPECT_NEAR(integral, rule.weights[j], 1e-14);
            EXPECT_NEAR(square, rule.weights[j], 1e-14);
        }
    }
    const GaussRule1D rule = gauss_rule(GaussFamily::HermiteNormal, 5);
    for (int j = 0; j < 5; ++j) {
        EXPECT_NEAR(normal_mean([&](double y) { return lagrange_1d(rule.nodes, j, y); }), rule.weights[j], 1e-13);
    }
}

TEST(GaussRule, CustomRecurrenceOnUnitInterval) {
    // Uniform density on [0, 1]: alpha = 1/2, beta_j = j^2 / (4 (4 j^2 - 1)).
    Recurrence rec;
    rec.lower = 0.0;
    rec.upper = 1.0;
    for (int j = 0; j < 8; ++j) {
        rec.alpha.push_back(0.5);
        rec.beta.push_back(j == 0 ? 1.0 : j * j / (4.0 * (4.0 * j * j - 1.0)));
    }
    const GaussRule1D rule = gauss_rule(rec, 8);
    EXPECT_EQ(rule.family, GaussFamily::Custom);
    for (int a = 0; a <= 15; ++a) {
        EXPECT_NEAR(apply(rule, [a](double y) { return std::pow(y, a); }), 1.0 / (a + 1), 1e-14);
    }
    EXPECT_THROW(gauss_rule(rec, 9), InvalidArgument);  // recurrence too short
}

TEST(GaussRule, RejectsBadCounts) {
    EXPECT_THROW(gauss_rule(GaussFamily::LegendreUniform, 0), InvalidArgument);
    EXPECT_THROW(gauss_rule(GaussFamily::HermiteNormal, kMaxGaussPoints + 1), InvalidArgument);
    EXPECT_THROW(gauss_rule(GaussFamily::Custom, 3), InvalidArgument);
}

TEST(GaussRule, LagrangeBasisIsCardinal) {
    const GaussRule1D rule = gauss_rule(GaussFamily::HermiteNormal, 7);
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) EXPECT_EQ(lagrange_1d(rule.nodes, j, rule.nodes[i]), i == j ? 1.0 : 0.0);
    }
    EXPECT_EQ(lagrange_1d(Eigen::VectorXd::Constant(1, 0.0), 0, 3.7), 1.0);
}

TEST(GaussFamilyNames, RoundTrip) {
    for (GaussFamily f : {GaussFamily::LegendreUniform, GaussFamily::HermiteNormal, GaussFamily::Custom}) {
        EXPECT_EQ(gauss_family_from_string(to_string(f)), f);
    }
    EXPECT_EQ(gauss_family_from_string("uniform"), GaussFamily::LegendreUniform);
    EXPECT_EQ(gauss_family_from_string("gaussian"), GaussFamily::HermiteNormal);
    EXPECT_THROW(gauss_family_from_string("laguerre"), InvalidArgument);
}

}  // namespace
}  // namespace sndc
