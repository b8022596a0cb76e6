#include "sndc/gauss_rule.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "sndc/error.hpp"

namespace sndc {

std::string_view to_string(GaussFamily family) {
    switch (family) {
        case GaussFamily::LegendreUniform: return "legendre-uniform";
        case GaussFamily::HermiteNormal: return "hermite-normal";
        case GaussFamily::Custom: return "custom";
    }
    return "unknown";
}

GaussFamily gauss_family_from_string(std::string_view name) {
    if (name == "legendre-uniform" || name == "uniform") return GaussFamily::LegendreUniform;
    if (name == "hermite-normal" || name == "gaussian") return GaussFamily::HermiteNormal;
    if (name == "custom") return GaussFamily::Custom;
    throw InvalidArgument(fmt::format("unknown quadrature family '{}'", name));
}

Recurrence legendre_uniform_recurrence(int count) {
    Recurrence rec;
    rec.alpha.assign(static_cast<std::size_t>(count), 0.0);
    rec.beta.resize(static_cast<std::size_t>(count));
    rec.beta[0] = 1.0;
    for (int j = 1; j < count; ++j) {
        const double jj = static_cast<double>(j) * j;
        rec.beta[j] = jj / (4.0 * jj - 1.0);
    }
    rec.lower = -1.0;
    rec.upper = 1.0;
    return rec;
}

Recurrence hermite_normal_recurrence(int count) {
    Recurrence rec;
    rec.alpha.assign(static_cast<std::size_t>(count), 0.0);
    rec.beta.resize(static_cast<std::size_t>(count));
    rec.beta[0] = 1.0;
    for (int j = 1; j < count; ++j) rec.beta[j] = j;
    return rec;
}

namespace {

struct OrthonormalValues {
    double value = 0.0;       // p_n(y), orthonormal, degree n
    double derivative = 0.0;  // p_n'(y)
    double sum_squares = 0.0; // sum_{j<n} p_j(y)^2
};

// Orthonormal recurrence: sqrt(beta_{j+1}) p_{j+1} = (y - alpha_j) p_j - sqrt(beta_j) p_{j-1}.
// beta_n is needed for p_n; when the caller only supplied n coefficients the
// last step is taken monic-scaled, which leaves the roots unchanged.
OrthonormalValues evaluate_orthonormal(const Recurrence& rec, int n, double y) {
    double p_prev = 0.0;
    double p = 1.0 / std::sqrt(rec.beta[0]);
    double d_prev = 0.0;
    double d = 0.0;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        sum += p * p;
        const double sb_j = j > 0 ? std::sqrt(rec.beta[j]) : 0.0;
        const double sb_next = j + 1 < static_cast<int>(rec.beta.size()) ? std::sqrt(rec.beta[j + 1]) : 1.0;
        const double p_next = ((y - rec.alpha[j]) * p - sb_j * p_prev) / sb_next;
        const double d_next = (p + (y - rec.alpha[j]) * d - sb_j * d_prev) / sb_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    return {p, d, sum};
}

}  // namespace

GaussRule1D gauss_rule(const Recurrence& rec, int count) {
    SNDC_REQUIRE(count >= 1, InvalidArgument, "gauss_rule needs at least one point");
    SNDC_REQUIRE(count <= kMaxGaussPoints, InvalidArgument,
                 fmt::format("gauss_rule: {} points exceeds the supported maximum {}", count, kMaxGaussPoints));
    SNDC_REQUIRE(static_cast<int>(rec.alpha.size()) >= count && static_cast<int>(rec.beta.size()) >= count,
                 InvalidArgument, "gauss_rule: recurrence shorter than requested point count");
    SNDC_REQUIRE(rec.beta[0] > 0.0, InvalidArgument, "gauss_rule: density must have positive mass");

    Eigen::VectorXd diag(count);
    Eigen::VectorXd sub(std::max(count - 1, 0));
    for (int j = 0; j < count; ++j) diag[j] = rec.alpha[j];
    for (int j = 1; j < count; ++j) {
        SNDC_REQUIRE(rec.beta[j] > 0.0, InvalidArgument, "gauss_rule: recurrence beta must be positive");
        sub[j - 1] = std::sqrt(rec.beta[j]);
    }

    Eigen::VectorXd nodes(count);
    if (count == 1) {
        nodes[0] = diag[0];
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        SNDC_REQUIRE(solver.info() == Eigen::Success, SolverError, "gauss_rule: tridiagonal eigensolver failed");
        nodes = solver.eigenvalues();
    }

    Eigen::VectorXd weights(count);
    for (int i = 0; i < count; ++i) {
        double y = nodes[i];
        for (int it = 0; it < 3; ++it) {
            const auto v = evaluate_orthonormal(rec, count, y);
            if (v.derivative == 0.0) break;
            const double step = v.value / v.derivative;
            y -= step;
            if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(y))) break;
        }
        nodes[i] = y;
        weights[i] = 1.0 / evaluate_orthonormal(rec, count, y).sum_squares;
    }

    bool symmetric = true;
    for (int j = 0; j < count; ++j) symmetric = symmetric && rec.alpha[j] == 0.0;
    if (symmetric) {
        for (int i = 0; i < count / 2; ++i) {
            const int m = count - 1 - i;
            const double y = 0.5 * (nodes[m] - nodes[i]);
            const double w = 0.5 * (weights[m] + weights[i]);
            nodes[i] = -y;
            nodes[m] = y;
            weights[i] = w;
            weights[m] = w;
        }
        if (count % 2 == 1) nodes[count / 2] = 0.0;
    }

    for (int i = 1; i < count; ++i) {
        SNDC_REQUIRE(nodes[i] > nodes[i - 1], SolverError, "gauss_rule: nodes not strictly increasing");
    }
    GaussRule1D rule;
    rule.family = GaussFamily::Custom;
    rule.nodes = std::move(nodes);
    rule.weights = std::move(weights);
    return rule;
}

GaussRule1D gauss_rule(GaussFamily family, int count) {
    SNDC_REQUIRE(count >= 1, InvalidArgument, "gauss_rule needs at least one point");
    SNDC_REQUIRE(count <= kMaxGaussPoints, InvalidArgument,
                 fmt::format("gauss_rule: {} points exceeds the supported maximum {}", count, kMaxGaussPoints));
    GaussRule1D rule;
    switch (family) {
        case GaussFamily::LegendreUniform: rule = gauss_rule(legendre_uniform_recurrence(count), count); break;
        case GaussFamily::HermiteNormal: rule = gauss_rule(hermite_normal_recurrence(count), count); break;
        case GaussFamily::Custom:
            throw InvalidArgument("gauss_rule: the custom family needs an explicit recurrence");
    }
    rule.family = family;
    return rule;
}

double lagrange_1d(const Eigen::VectorXd& nodes, int j, double y) {
    double value = 1.0;
    for (int i = 0; i < nodes.size(); ++i) {
        if (i != j) value *= (y - nodes[i]) / (nodes[j] - nodes[i]);
    }
    return value;
}

}  // namespace sndc
