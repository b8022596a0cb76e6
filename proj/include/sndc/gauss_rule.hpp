#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace sndc {

enum class GaussFamily { LegendreUniform, HermiteNormal, Custom };

std::string_view to_string(GaussFamily family);
GaussFamily gauss_family_from_string(std::string_view name);

/// Three-term recurrence of the monic orthogonal polynomials of a probability
/// density: q_{j+1}(y) = (y - alpha_j) q_j(y) - beta_j q_{j-1}(y), with
/// beta_0 the total mass of the density (1 for a probability density).
struct Recurrence {
    std::vector<double> alpha;
    std::vector<double> beta;
    double lower = -std::numeric_limits<double>::infinity();  ///< support of the density
    double upper = std::numeric_limits<double>::infinity();
};

/// Recurrence for the uniform density 1/2 on [-1, 1] (monic Legendre).
Recurrence legendre_uniform_recurrence(int count);
/// Recurrence for the standard normal density (monic probabilists' Hermite).
Recurrence hermite_normal_recurrence(int count);

/// Gauss quadrature rule for a probability density: nodes are the roots of
/// the degree-`count` orthogonal polynomial, weights sum to one.
struct GaussRule1D {
    GaussFamily family = GaussFamily::LegendreUniform;
    Eigen::VectorXd nodes;    ///< strictly increasing
    Eigen::VectorXd weights;  ///< positive, sum to one

    [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }
};

inline constexpr int kMaxGaussPoints = 64;

/// Nodes/weights from the symmetric tridiagonal Jacobi matrix, polished by
/// Newton steps on the orthonormal recurrence; weights are Christoffel
/// numbers. Throws InvalidArgument for count < 1 or count > 64.
GaussRule1D gauss_rule(GaussFamily family, int count);
GaussRule1D gauss_rule(const Recurrence& recurrence, int count);

/// Value of the j-th 1D Lagrange cardinal polynomial on the rule's nodes.
double lagrange_1d(const Eigen::VectorXd& nodes, int j, double y);

}  // namespace sndc
