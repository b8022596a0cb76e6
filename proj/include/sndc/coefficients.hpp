#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sndc/error.hpp"
#include "sndc/gauss_rule.hpp"
#include "sndc/mesh.hpp"

namespace sndc {

enum class Distribution { Uniform, Gaussian };

std::string_view to_string(Distribution d);
Distribution distribution_from_string(std::string_view name);
GaussFamily gauss_family(Distribution d);

/// One random dimension y_n: support Gamma_n and the auxiliary density used
/// to place collocation nodes.
struct ParameterDimension {
    GaussFamily family = GaussFamily::LegendreUniform;
    double lower = -1.0;
    double upper = 1.0;
    std::optional<Recurrence> recurrence;  ///< required for GaussFamily::Custom

    static ParameterDimension uniform() { return {}; }
    static ParameterDimension gaussian();
};

using MatrixField = std::function<Eigen::Matrix2d(const Eigen::VectorXd& y, const Eigen::Vector2d& x)>;
using ScalarField = std::function<double(const Eigen::VectorXd& y, const Eigen::Vector2d& x)>;
using VectorField = std::function<Eigen::Vector2d(const Eigen::VectorXd& y, const Eigen::Vector2d& x)>;

/// Known strong solution u and its derivatives (used for manufactured problems).
struct ExactSolution {
    ScalarField u;
    VectorField gradient;
    MatrixField hessian;
};

/// Random data A(y, x), f(y, x) on a rectangle. Callbacks must be pure and
/// reentrant; the object is immutable after construction.
struct ParametricProblem {
    std::string name;
    Rectangle domain;
    std::vector<ParameterDimension> dimensions;
    MatrixField diffusion;
    ScalarField forcing;
    /// rho / rho_hat; identically one when the joint density is the product density.
    std::function<double(const Eigen::VectorXd& y)> density_ratio = [](const Eigen::VectorXd&) { return 1.0; };
    std::optional<ExactSolution> exact;

    [[nodiscard]] int num_dimensions() const { return static_cast<int>(dimensions.size()); }
};

/// Outcome of the sampled uniform-ellipticity and Cordes checks.
struct EllipticityCordesReport {
    double lambda_est = 1.0;   ///< min over samples of min(lambda_min(A), 1 / lambda_max(A)), at most 1
    double epsilon_est = 1.0;  ///< 1 / r_max - (d - 1), r = |A|^2 / (tr A)^2
    double max_cordes_ratio = 0.0;
    double max_ratio_rho = 0.0;  ///< max of rho / rho_hat over the y samples
    std::size_t x_samples = 0;
    std::size_t y_samples = 0;
    Eigen::Vector2d worst_lambda_x = Eigen::Vector2d::Zero();
    Eigen::VectorXd worst_lambda_y;
    Eigen::Vector2d worst_epsilon_x = Eigen::Vector2d::Zero();
    Eigen::VectorXd worst_epsilon_y;
    bool passed = false;
};

/// gamma = tr A / |A|^2 with the Frobenius norm. Throws for tr A <= 0.
template <typename Derived>
typename Derived::Scalar gamma_scaling(const Eigen::MatrixBase<Derived>& a) {
    const auto trace = a.trace();
    if (!(trace > 0)) throw InvalidArgument("gamma_scaling: trace must be positive");
    return trace / a.squaredNorm();
}

double gamma_scaling(const ParametricProblem& problem, const Eigen::VectorXd& y, const Eigen::Vector2d& x);

/// Evaluates A at every (x, y) pair. Throws InvalidArgument for a
/// non-symmetric sample or a non-positive trace.
EllipticityCordesReport check_assumptions(const ParametricProblem& problem, const std::vector<Eigen::Vector2d>& x_samples,
                                          const std::vector<Eigen::VectorXd>& y_samples);

/// `per_axis` x `per_axis` uniform grid over the domain, boundary included.
std::vector<Eigen::Vector2d> default_x_samples(const Rectangle& domain, int per_axis = 101);
/// Tensor grid with, per dimension, `gauss_points` Gauss nodes plus the two
/// endpoints of the sampling interval (Gaussian dimensions are cut to [-8, 8]).
std::vector<Eigen::VectorXd> default_y_samples(const ParametricProblem& problem, int gauss_points = 31);

/// A = diag(5/2 + e^{-y1^2/100}(cos pi x1 + sin pi x2), 5/2 + e^{-y2^2/100}(sin pi x1 + cos pi x2)),
/// f = (2 - x1^2 - x2^2) / 8 on (-1, 1)^2 with two i.i.d. random variables.
ParametricProblem section6_problem(Distribution distribution);

/// A = I, u = sin(pi x1) sin(pi x2), f = Laplacian of u; independent of y.
ParametricProblem manufactured_identity_problem(Distribution distribution = Distribution::Uniform, int dimensions = 2);

/// A = I and f = Laplacian of the given exact solution, independent of y.
ParametricProblem identity_problem(ExactSolution exact, std::string name, const Rectangle& domain = {},
                                   Distribution distribution = Distribution::Uniform, int dimensions = 2);

/// `section6-uniform`, `section6-gaussian`, `manufactured-identity`.
ParametricProblem problem_by_name(std::string_view name, std::optional<Distribution> distribution = std::nullopt);

}  // namespace sndc
