#pragma once

#include <Eigen/Core>

namespace sndc {

/// Quadrature on a reference cell: the triangle {(0,0),(1,0),(0,1)}
/// (dim 2, measure 1/2) or the interval [0,1] (dim 1, measure 1).
/// Points are stored column-wise.
struct QuadratureRule {
    int dim = 2;
    int degree = 0;
    Eigen::MatrixXd points;
    Eigen::VectorXd weights;

    [[nodiscard]] int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr int kMaxQuadratureDegree = 40;

/// Exact for polynomials of total degree <= degree. Degree 0 and 1 give the
/// centroid rule; higher degrees use collapsed tensor Gauss-Legendre.
QuadratureRule triangle_rule(int degree);

/// Gauss-Legendre on [0,1] with ceil((degree+1)/2) points.
QuadratureRule edge_rule(int degree);

}  // namespace sndc
