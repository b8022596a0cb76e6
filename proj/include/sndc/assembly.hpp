#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sndc/coefficients.hpp"
#include "sndc/fem.hpp"

namespace sndc {

/// Curl of a 2D vector field from its Jacobian J(i, j) = d psi_i / d x_j.
template <typename Derived>
typename Derived::Scalar curl2(const Eigen::MatrixBase<Derived>& jacobian) {
    return jacobian(1, 0) - jacobian(0, 1);
}

/// v - (v . n) n for a unit normal n.
template <typename DerivedV, typename DerivedN>
Eigen::Matrix<typename DerivedV::Scalar, 2, 1> tangential_part(const Eigen::MatrixBase<DerivedV>& v,
                                                               const Eigen::MatrixBase<DerivedN>& n) {
    return v - v.dot(n) * n;
}

struct AssemblyOptions {
    int volume_degree = 0;  ///< 0 selects 2k + 2
    int edge_degree = 0;    ///< 0 selects 2k + 2
    /// When false the boundary trace terms are dropped and the quadratic
    /// form is the continuous functional restricted to U x G.
    bool boundary_penalty = true;

    [[nodiscard]] int volume_degree_for(int k) const { return volume_degree > 0 ? volume_degree : 2 * k + 2; }
    [[nodiscard]] int edge_degree_for(int k) const { return edge_degree > 0 ? edge_degree : 2 * k + 2; }
};

/// Symmetric system of the parametric Euler-Lagrange equations; unknowns
/// ordered [u | g_1 | g_2] as in FESpacePair. Boundary rows of U are
/// eliminated, not penalized.
struct AssembledSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    int dim_u = 0;
    int dim_g = 0;
    double forcing_norm_squared = 0.0;  ///< ||f||^2, so that E_h(z) = z'Mz - 2 b'z + ||f||^2
    std::vector<std::string> warnings;
};

AssembledSystem assemble_parametric_system(const FESpacePair& space, const ParametricProblem& problem,
                                           const Eigen::VectorXd& y, const AssemblyOptions& options = {});

enum class LinearSolver { Cholesky, ConjugateGradient };

struct SolverOptions {
    LinearSolver method = LinearSolver::Cholesky;
    double cg_tolerance = 1e-12;
    int max_iterations = 0;  ///< 0 selects 10 * order
};

/// Solves M z = b for SPD M. Throws SolverError when the factorization breaks
/// down (the matrix is not positive definite) or the residual check fails.
Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs,
                          const SolverOptions& options = {});

DiscreteFieldPair solve_deterministic(const AssembledSystem& system, const SolverOptions& options = {});

/// True if a sparse Cholesky factorization succeeds.
bool is_positive_definite(const Eigen::SparseMatrix<double>& matrix);

/// Relative symmetry defect max |M - M^T| / max |M|.
double symmetry_defect(const Eigen::SparseMatrix<double>& matrix);

/// E_h(u, g; y) evaluated by quadrature:
/// ||grad u - g||^2 + ||curl g||^2 + sum_F (1 + 1/h_{K,F}) ||g_t||_F^2 + ||A:Dg - f||^2.
double evaluate_cost_Eh(const FESpacePair& space, const DiscreteFieldPair& fields, const ParametricProblem& problem,
                        const Eigen::VectorXd& y, const AssemblyOptions& options = {});

/// Stacks (u, g) into one vector in system order, and back.
Eigen::VectorXd stack(const DiscreteFieldPair& fields);
DiscreteFieldPair unstack(const Eigen::VectorXd& z, int dim_u);

/// Boundary edges grouped by owning cell.
std::vector<std::vector<int>> boundary_edges_by_cell(const SimplicialMesh& mesh);

}  // namespace sndc
