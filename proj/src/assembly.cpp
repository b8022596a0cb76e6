#include "sndc/assembly.hpp"

#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include "sndc/error.hpp"

namespace sndc {

std::vector<std::vector<int>> boundary_edges_by_cell(const SimplicialMesh& mesh) {
    std::vector<std::vector<int>> by_cell(static_cast<std::size_t>(mesh.num_cells()));
    const auto& edges = mesh.boundary_edges();
    for (std::size_t e = 0; e < edges.size(); ++e) by_cell[edges[e].cell].push_back(static_cast<int>(e));
    return by_cell;
}

Eigen::VectorXd stack(const DiscreteFieldPair& fields) {
    Eigen::VectorXd z(fields.u.size() + fields.g.size());
    z << fields.u, fields.g;
    return z;
}

DiscreteFieldPair unstack(const Eigen::VectorXd& z, int dim_u) {
    return {z.head(dim_u), z.tail(z.size() - dim_u)};
}

namespace {

// Residual operator rows at one point for the local unknowns
// [phi_0..phi_{n-1} | psi1_0.. | psi2_0..]:
//   rows 0-1: grad phi - psi, row 2: curl psi, row 3: A : D psi.
void residual_operator(const Eigen::VectorXd& values, const Eigen::Matrix2Xd& grads, const Eigen::Matrix2d& a,
                       Eigen::Matrix<double, 4, Eigen::Dynamic>& b) {
    const int n = static_cast<int>(values.size());
    b.setZero(4, 3 * n);
    for (int i = 0; i < n; ++i) {
        const double dx = grads(0, i);
        const double dy = grads(1, i);
        b(0, i) = dx;
        b(1, i) = dy;
        b(0, n + i) = -values[i];
        b(1, 2 * n + i) = -values[i];
        b(2, n + i) = -dy;
        b(2, 2 * n + i) = dx;
        b(3, n + i) = a(0, 0) * dx + a(0, 1) * dy;
        b(3, 2 * n + i) = a(1, 0) * dx + a(1, 1) * dy;
    }
}

// Global row of each local unknown, -1 for eliminated boundary values of u.
std::vector<int> local_to_global(const FESpacePair& space, int cell) {
    const int n = space.nodes_per_cell();
    std::vector<int> map(static_cast<std::size_t>(3 * n));
    for (int l = 0; l < n; ++l) {
        const int node = space.cell_node(cell, l);
        map[l] = space.u_index(node);
        map[n + l] = space.dim_u() + space.g_index(node, 0);
        map[2 * n + l] = space.dim_u() + space.g_index(node, 1);
    }
    return map;
}

struct EdgeSample {
    Eigen::VectorXd values;  // shape values of the owning cell at the point
    double weight;           // quadrature weight times edge length times (1 + 1/h_{K,F})
    Eigen::Vector2d tangent;
};

std::vector<EdgeSample> edge_samples(const FESpacePair& space, const BoundaryEdge& edge, const QuadratureRule& rule) {
    const SimplicialMesh& mesh = space.mesh();
    const Eigen::Vector2d a = mesh.vertices()[edge.vertices[0]];
    const Eigen::Vector2d b = mesh.vertices()[edge.vertices[1]];
    const double factor = 1.0 + 1.0 / edge.cell_diameter;
    std::vector<EdgeSample> samples;
    samples.reserve(static_cast<std::size_t>(rule.size()));
    for (int q = 0; q < rule.size(); ++q) {
        const Eigen::Vector2d x = a + rule.points(0, q) * (b - a);
        samples.push_back({space.element().values(to_reference(mesh, edge.cell, x)),
                           rule.weights[q] * edge.length * factor, edge.tangent});
    }
    return samples;
}

}  // namespace

AssembledSystem assemble_parametric_system(const FESpacePair& space, const ParametricProblem& problem,
                                           const Eigen::VectorXd& y, const AssemblyOptions& options) {
    SNDC_REQUIRE(y.size() == problem.num_dimensions(), InvalidArgument,
                 fmt::format("parameter vector has {} entries, problem has {} dimensions", y.size(), problem.num_dimensions()));
    const int k = space.degree();
    const int n = space.nodes_per_cell();
    const int order = space.dim_total();
    const SimplicialMesh& mesh = space.mesh();

    AssembledSystem system;
    system.dim_u = space.dim_u();
    system.dim_g = space.dim_g();
    system.rhs = Eigen::VectorXd::Zero(order);
    if (options.volume_degree_for(k) < 2 * k) {
        system.warnings.push_back(fmt::format("volume quadrature degree {} below 2k = {}", options.volume_degree_for(k), 2 * k));
    }
    if (options.boundary_penalty && options.edge_degree_for(k) < 2 * k) {
        system.warnings.push_back(fmt::format("edge quadrature degree {} below 2k = {}", options.edge_degree_for(k), 2 * k));
    }

    const ReferenceTabulation ref = tabulate_reference(space.element(), triangle_rule(options.volume_degree_for(k)));
    const QuadratureRule erule = edge_rule(options.edge_degree_for(k));
    const auto edges_of_cell = boundary_edges_by_cell(mesh);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.num_cells()) * 9 * n * n);
    Eigen::MatrixXd local(3 * n, 3 * n);
    Eigen::VectorXd local_rhs(3 * n);
    Eigen::Matrix<double, 4, Eigen::Dynamic> b(4, 3 * n);

    for (int c = 0; c < mesh.num_cells(); ++c) {
        const CellTabulation tab = tabulate_basis(space, c, ref);
        local.setZero();
        local_rhs.setZero();
        for (int q = 0; q < ref.rule.size(); ++q) {
            const Eigen::Vector2d x = tab.points.col(q);
            const Eigen::Matrix2d a = problem.diffusion(y, x);
            const double f = problem.forcing(y, x);
            const double w = tab.weights[q];
            residual_operator(ref.values.col(q), tab.gradients[q], a, b);
            local.noalias() += w * b.transpose() * b;
            local_rhs.noalias() += (w * f) * b.row(3).transpose();
            system.forcing_norm_squared += w * f * f;
        }
        if (options.boundary_penalty) {
            for (int e : edges_of_cell[c]) {
                for (const EdgeSample& s : edge_samples(space, mesh.boundary_edges()[e], erule)) {
                    Eigen::VectorXd row = Eigen::VectorXd::Zero(3 * n);
                    row.segment(n, n) = s.tangent.x() * s.values;
                    row.segment(2 * n, n) = s.tangent.y() * s.values;
                    local.noalias() += s.weight * row * row.transpose();
                }
            }
        }
        const std::vector<int> map = local_to_global(space, c);
        for (int i = 0; i < 3 * n; ++i) {
            if (map[i] < 0) continue;
            system.rhs[map[i]] += local_rhs[i];
            for (int j = 0; j < 3 * n; ++j) {
                if (map[j] < 0) continue;
                triplets.emplace_back(map[i], map[j], local(i, j));
            }
        }
    }
    system.matrix.resize(order, order);
    system.matrix.setFromTriplets(triplets.begin(), triplets.end());
    system.matrix.makeCompressed();
    return system;
}

bool is_positive_definite(const Eigen::SparseMatrix<double>& matrix) {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt(matrix);
    return llt.info() == Eigen::Success;
}

double symmetry_defect(const Eigen::SparseMatrix<double>& matrix) {
    const Eigen::SparseMatrix<double> diff = matrix - Eigen::SparseMatrix<double>(matrix.transpose());
    double max_diff = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it) max_diff = std::max(max_diff, std::abs(it.value()));
    }
    const double scale = matrix.coeffs().cwiseAbs().maxCoeff();
    return scale > 0.0 ? max_diff / scale : max_diff;
}

Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs,
                          const SolverOptions& options) {
    SNDC_REQUIRE(matrix.rows() == matrix.cols() && matrix.rows() == rhs.size(), InvalidArgument,
                 "solve_spd: dimension mismatch");
    const Eigen::Index order = matrix.rows();
    if (order == 0) return Eigen::VectorXd(0);
    if (rhs.isZero(0.0)) return Eigen::VectorXd::Zero(order);

    Eigen::VectorXd z;
    if (options.method == LinearSolver::Cholesky) {
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt(matrix);
        SNDC_REQUIRE(llt.info() == Eigen::Success, SolverError,
                     fmt::format("sparse Cholesky factorization of order {} failed: matrix is not positive definite", order));
        z = llt.solve(rhs);
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg(matrix);
        cg.setTolerance(options.cg_tolerance);
        cg.setMaxIterations(options.max_iterations > 0 ? options.max_iterations : static_cast<int>(10 * order));
        z = cg.solve(rhs);
        SNDC_REQUIRE(cg.info() == Eigen::Success, SolverError,
                     fmt::format("conjugate gradient did not converge: {} iterations, estimated error {:.3e}",
                                 cg.iterations(), cg.error()));
    }
    const double residual = (matrix * z - rhs).norm();
    const double bound = 1e-10 * (rhs.norm() + matrix.norm() * z.norm());
    SNDC_REQUIRE(residual <= bound, SolverError,
                 fmt::format("linear solve residual {:.3e} exceeds bound {:.3e}", residual, bound));
    return z;
}

DiscreteFieldPair solve_deterministic(const AssembledSystem& system, const SolverOptions& options) {
    return unstack(solve_spd(system.matrix, system.rhs, options), system.dim_u);
}

double evaluate_cost_Eh(const FESpacePair& space, const DiscreteFieldPair& fields, const ParametricProblem& problem,
                        const Eigen::VectorXd& y, const AssemblyOptions& options) {
    const int k = space.degree();
    const SimplicialMesh& mesh = space.mesh();
    const ReferenceTabulation ref = tabulate_reference(space.element(), triangle_rule(options.volume_degree_for(k)));
    const QuadratureRule erule = edge_rule(options.edge_degree_for(k));
    const auto edges_of_cell = boundary_edges_by_cell(mesh);

    double cost = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const CellTabulation tab = tabulate_basis(space, c, ref);
        const Eigen::VectorXd u = local_u(space, fields.u, c);
        const Eigen::Matrix2Xd g = local_g(space, fields.g, c);
        for (int q = 0; q < ref.rule.size(); ++q) {
            const Eigen::Vector2d x = tab.points.col(q);
            const Eigen::Vector2d grad_u = tab.gradients[q] * u;
            const Eigen::Vector2d g_val = g * ref.values.col(q);
            const Eigen::Matrix2d dg = g * tab.gradients[q].transpose();  // (i, j) = d g_i / d x_j
            const Eigen::Matrix2d a = problem.diffusion(y, x);
            const double pde = a.cwiseProduct(dg).sum() - problem.forcing(y, x);
            const double curl = curl2(dg);
            cost += tab.weights[q] * ((grad_u - g_val).squaredNorm() + curl * curl + pde * pde);
        }
        if (!options.boundary_penalty) continue;
        for (int e : edges_of_cell[c]) {
            const BoundaryEdge& edge = mesh.boundary_edges()[e];
            for (const EdgeSample& s : edge_samples(space, edge, erule)) {
                const Eigen::Vector2d g_val = g * s.values;
                cost += s.weight * tangential_part(g_val, edge.normal).squaredNorm();
            }
        }
    }
    return cost;
}

}  // namespace sndc
