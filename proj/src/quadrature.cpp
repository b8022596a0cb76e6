#include "sndc/quadrature.hpp"

#include <fmt/format.h>

#include "sndc/error.hpp"
#include "sndc/gauss_rule.hpp"

namespace sndc {

namespace {

void check_degree(int degree) {
    SNDC_REQUIRE(degree >= 0, InvalidArgument, "quadrature degree must be non-negative");
    SNDC_REQUIRE(degree <= kMaxQuadratureDegree, InvalidArgument,
                 fmt::format("quadrature degree {} above supported maximum {}", degree, kMaxQuadratureDegree));
}

// Gauss-Legendre on [0,1], weights summing to one.
GaussRule1D unit_interval_rule(int count) {
    GaussRule1D rule = gauss_rule(GaussFamily::LegendreUniform, count);
    rule.nodes = (rule.nodes.array() + 1.0) * 0.5;
    return rule;
}

}  // namespace

QuadratureRule triangle_rule(int degree) {
    check_degree(degree);
    QuadratureRule rule;
    rule.dim = 2;
    rule.degree = degree;
    if (degree <= 1) {
        rule.points = Eigen::MatrixXd::Constant(2, 1, 1.0 / 3.0);
        rule.weights = Eigen::VectorXd::Constant(1, 0.5);
        return rule;
    }
    // (s, t) in [0,1]^2 -> (s, t (1 - s)); Jacobian (1 - s) adds one degree in s.
    const int count = (degree + 3) / 2;
    const GaussRule1D g = unit_interval_rule(count);
    rule.points.resize(2, count * count);
    rule.weights.resize(count * count);
    int q = 0;
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < count; ++j, ++q) {
            const double s = g.nodes[i];
            const double t = g.nodes[j];
            rule.points(0, q) = s;
            rule.points(1, q) = t * (1.0 - s);
            rule.weights[q] = g.weights[i] * g.weights[j] * (1.0 - s);
        }
    }
    return rule;
}

QuadratureRule edge_rule(int degree) {
    check_degree(degree);
    const GaussRule1D g = unit_interval_rule(degree / 2 + 1);
    QuadratureRule rule;
    rule.dim = 1;
    rule.degree = degree;
    rule.points = g.nodes.transpose();
    rule.weights = g.weights;
    return rule;
}

}  // namespace sndc
