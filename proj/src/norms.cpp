#include "sndc/norms.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <fmt/format.h>

#include "sndc/assembly.hpp"
#include "sndc/error.hpp"
#include "sndc/parallel.hpp"

namespace sndc {

namespace {

struct SquaredParts {
    double u = 0.0;
    double g = 0.0;
    double boundary = 0.0;

    [[nodiscard]] PairNorm to_norm() const {
        return {std::sqrt(u + g + boundary), std::sqrt(u), std::sqrt(g), std::sqrt(boundary)};
    }
};

int volume_degree(const NormOptions& o, int k) { return o.volume_degree > 0 ? o.volume_degree : 2 * k + 2; }
int edge_degree(const NormOptions& o, int k) { return o.edge_degree > 0 ? o.edge_degree : 2 * k + 2; }

// Accumulates the norm of (u_h - u*, g_h - g*) where the exact parts may be absent.
SquaredParts accumulate(const FESpacePair& space, const DiscreteFieldPair& fields, const ExactSolution* exact,
                        const Eigen::VectorXd& y, const NormOptions& options) {
    const int k = space.degree();
    const SimplicialMesh& mesh = space.mesh();
    const ReferenceTabulation ref = tabulate_reference(space.element(), triangle_rule(volume_degree(options, k)));
    const QuadratureRule erule = edge_rule(edge_degree(options, k));
    const auto edges_of_cell = boundary_edges_by_cell(mesh);

    SquaredParts parts;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const CellTabulation tab = tabulate_basis(space, c, ref);
        const Eigen::VectorXd u = local_u(space, fields.u, c);
        const Eigen::Matrix2Xd g = local_g(space, fields.g, c);
        for (int q = 0; q < ref.rule.size(); ++q) {
            Eigen::Vector2d grad_u = tab.gradients[q] * u;
            Eigen::Matrix2d dg = g * tab.gradients[q].transpose();
            if (exact != nullptr) {
                const Eigen::Vector2d x = tab.points.col(q);
                grad_u -= exact->gradient(y, x);
                dg -= exact->hessian(y, x);
            }
            parts.u += tab.weights[q] * grad_u.squaredNorm();
            parts.g += tab.weights[q] * dg.squaredNorm();
        }
        for (int e : edges_of_cell[c]) {
            const BoundaryEdge& edge = mesh.boundary_edges()[e];
            const Eigen::Vector2d a = mesh.vertices()[edge.vertices[0]];
            const Eigen::Vector2d b = mesh.vertices()[edge.vertices[1]];
            const double factor = 1.0 + 1.0 / edge.cell_diameter;
            for (int q = 0; q < erule.size(); ++q) {
                const Eigen::Vector2d x = a + erule.points(0, q) * (b - a);
                Eigen::Vector2d value = g * space.element().values(to_reference(mesh, c, x));
                if (exact != nullptr) value -= exact->gradient(y, x);
                parts.boundary += erule.weights[q] * edge.length * factor * (value - value.dot(edge.normal) * edge.normal).squaredNorm();
            }
        }
    }
    return parts;
}

bool same_mesh(const SimplicialMesh& a, const SimplicialMesh& b) {
    return &a == &b || (a.vertices() == b.vertices() && a.cells() == b.cells());
}

}  // namespace

PairNorm pair_norm_h_components(const FESpacePair& space, const DiscreteFieldPair& fields, const NormOptions& options) {
    SNDC_REQUIRE(fields.u.size() == space.dim_u() && fields.g.size() == space.dim_g(), InvalidArgument,
                 "pair_norm_h: coefficient vectors do not match the spaces");
    return accumulate(space, fields, nullptr, Eigen::VectorXd(0), options).to_norm();
}

double pair_norm_h(const FESpacePair& space, const DiscreteFieldPair& fields, const NormOptions& options) {
    return pair_norm_h_components(space, fields, options).total;
}

PairNorm pair_error_exact(const FESpacePair& space, const DiscreteFieldPair& fields, const ExactSolution& exact,
                          const Eigen::VectorXd& y, const NormOptions& options) {
    SNDC_REQUIRE(fields.u.size() == space.dim_u() && fields.g.size() == space.dim_g(), InvalidArgument,
                 "pair_error_exact: coefficient vectors do not match the spaces");
    return accumulate(space, fields, &exact, y, options).to_norm();
}

Prolongation::Prolongation(const FESpacePair& coarse, const FESpacePair& fine) {
    SNDC_REQUIRE(fine.degree() >= coarse.degree(), InvalidArgument,
                 "prolongation needs the fine degree to be at least the coarse degree");
    const SimplicialMesh& cm = coarse.mesh();
    const SimplicialMesh& fm = fine.mesh();
    if (fine.degree() == coarse.degree() && same_mesh(cm, fm)) {
        identity_ = true;
        return;
    }
    const Eigen::AlignedBox2d cb = cm.bounding_box();
    const Eigen::AlignedBox2d fb = fm.bounding_box();
    SNDC_REQUIRE((cb.min() - fb.min()).norm() <= 1e-12 * cb.diagonal().norm() &&
                     (cb.max() - fb.max()).norm() <= 1e-12 * cb.diagonal().norm() &&
                     std::abs(cb.volume() - fb.volume()) <= 1e-12 * cb.volume(),
                 InvalidArgument, "prolongation: coarse and fine meshes cover different domains");

    const CellLocator locator(cm);
    const int nlc = coarse.nodes_per_cell();
    std::vector<char> visited(static_cast<std::size_t>(fine.num_nodes()), 0);
    std::vector<Eigen::Triplet<double>> tu;
    std::vector<Eigen::Triplet<double>> tg;
    for (int c = 0; c < fm.num_cells(); ++c) {
        const Eigen::Vector2d centroid =
            (fm.cell_vertex(c, 0) + fm.cell_vertex(c, 1) + fm.cell_vertex(c, 2)) / 3.0;
        const int parent = locator.find(centroid);
        SNDC_REQUIRE(parent >= 0, InvalidArgument, fmt::format("prolongation: fine cell {} lies outside the coarse mesh", c));
        for (int v = 0; v < 3; ++v) {
            SNDC_REQUIRE(barycentric(cm, parent, fm.cell_vertex(c, v)).minCoeff() >= -1e-10, InvalidArgument,
                         fmt::format("prolongation: meshes are not nested (fine cell {} straddles coarse cells)", c));
        }
        for (int l = 0; l < fine.nodes_per_cell(); ++l) {
            const int node = fine.cell_node(c, l);
            if (visited[node]) continue;
            visited[node] = 1;
            const Eigen::Vector2d x = fine.node_coordinates().col(node);
            const Eigen::VectorXd phi = coarse.element().values(to_reference(cm, parent, x));
            const int fu = fine.u_index(node);
            for (int j = 0; j < nlc; ++j) {
                const int cnode = coarse.cell_node(parent, j);
                for (int comp = 0; comp < 2; ++comp) {
                    tg.emplace_back(fine.g_index(node, comp), coarse.g_index(cnode, comp), phi[j]);
                }
                const int cu = coarse.u_index(cnode);
                if (fu >= 0 && cu >= 0) tu.emplace_back(fu, cu, phi[j]);
            }
        }
    }
    to_u_.resize(fine.dim_u(), coarse.dim_u());
    to_u_.setFromTriplets(tu.begin(), tu.end());
    to_g_.resize(fine.dim_g(), coarse.dim_g());
    to_g_.setFromTriplets(tg.begin(), tg.end());
}

DiscreteFieldPair Prolongation::apply(const DiscreteFieldPair& coarse) const {
    if (identity_) return coarse;
    return {to_u_ * coarse.u, to_g_ * coarse.g};
}

TensorCollocationGrid error_evaluation_grid(const ParametricProblem& problem, std::span<const int> p_a,
                                            std::span<const int> p_b) {
    SNDC_REQUIRE(p_a.size() == p_b.size(), InvalidArgument, "error grid: degree vectors of different length");
    std::vector<int> degrees(p_a.size());
    for (std::size_t n = 0; n < p_a.size(); ++n) degrees[n] = std::max(p_a[n], p_b[n]) + 1;
    return TensorCollocationGrid::for_problem(problem, degrees);
}

namespace {

ErrorRecord reduce(const std::vector<SquaredParts>& parts, const TensorCollocationGrid& grid,
                   const std::function<double(const Eigen::VectorXd&)>& ratio) {
    SquaredParts total;
    for (int j = 0; j < grid.size(); ++j) {
        const double w = grid.weight(j) * (ratio ? ratio(grid.node(j)) : 1.0);
        total.u += w * parts[j].u;
        total.g += w * parts[j].g;
        total.boundary += w * parts[j].boundary;
    }
    const PairNorm norm = total.to_norm();
    ErrorRecord record;
    record.error = norm.total;
    record.err_u = norm.u;
    record.err_g = norm.g;
    record.err_bnd = norm.boundary;
    return record;
}

void fill_labels(ErrorRecord& record, const CollocatedSolution& coarse) {
    record.h = coarse.space->mesh().h();
    record.k = coarse.space->degree();
    record.p = coarse.grid.degrees();
}

}  // namespace

ErrorRecord stochastic_error(const CollocatedSolution& coarse, const CollocatedSolution& reference,
                             const TensorCollocationGrid& eval_grid,
                             const std::function<double(const Eigen::VectorXd&)>& ratio, int threads,
                             const NormOptions& options) {
    SNDC_REQUIRE(coarse.grid.num_dimensions() == reference.grid.num_dimensions() &&
                     eval_grid.num_dimensions() == reference.grid.num_dimensions(),
                 InvalidArgument, "stochastic_error: grids have different numbers of random dimensions");
    const Prolongation prolong(*coarse.space, *reference.space);
    std::vector<DiscreteFieldPair> lifted;
    lifted.reserve(coarse.nodes.size());
    for (const auto& node : coarse.nodes) lifted.push_back(prolong.apply(node));

    std::vector<SquaredParts> parts(static_cast<std::size_t>(eval_grid.size()));
    parallel_for(eval_grid.size(), threads, [&](int j) {
        const Eigen::VectorXd y = eval_grid.node(j);
        const DiscreteFieldPair diff = interpolate(reference, y) - interpolate_nodal<DiscreteFieldPair>(coarse.grid, lifted, y);
        parts[j] = accumulate(*reference.space, diff, nullptr, y, options);
    });
    ErrorRecord record = reduce(parts, eval_grid, ratio);
    fill_labels(record, coarse);
    return record;
}

ErrorRecord stochastic_error_exact(const CollocatedSolution& coarse, const ParametricProblem& problem,
                                   const TensorCollocationGrid& eval_grid, int threads, const NormOptions& options) {
    SNDC_REQUIRE(problem.exact.has_value(), InvalidArgument,
                 fmt::format("problem '{}' has no exact solution", problem.name));
    std::vector<SquaredParts> parts(static_cast<std::size_t>(eval_grid.size()));
    parallel_for(eval_grid.size(), threads, [&](int j) {
        const Eigen::VectorXd y = eval_grid.node(j);
        parts[j] = accumulate(*coarse.space, interpolate(coarse, y), &*problem.exact, y, options);
    });
    ErrorRecord record = reduce(parts, eval_grid, problem.density_ratio);
    fill_labels(record, coarse);
    return record;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
    SNDC_REQUIRE(errors.size() == hs.size() && errors.size() >= 2, InvalidArgument,
                 "eoc needs matching error and mesh-size lists with at least two entries");
    for (std::size_t i = 0; i < errors.size(); ++i) {
        SNDC_REQUIRE(errors[i] > 0.0, InvalidArgument, "eoc: errors must be positive");
        SNDC_REQUIRE(i == 0 || hs[i] < hs[i - 1], InvalidArgument, "eoc: mesh sizes must be strictly decreasing");
    }
    std::vector<double> orders;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        orders.push_back(std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]));
    }
    return orders;
}

DecayFit p_decay_fit(const std::vector<double>& errors, const std::vector<double>& ps, DecayMode mode) {
    SNDC_REQUIRE(errors.size() == ps.size(), InvalidArgument, "p_decay_fit: list lengths differ");
    SNDC_REQUIRE(errors.size() >= 3, InvalidArgument, "p_decay_fit needs at least three points");
    const auto n = static_cast<Eigen::Index>(errors.size());
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd logs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        SNDC_REQUIRE(errors[i] > 0.0, InvalidArgument, "p_decay_fit: errors must be positive");
        SNDC_REQUIRE(i == 0 || ps[i] > ps[i - 1], InvalidArgument, "p_decay_fit: degrees must be increasing");
        SNDC_REQUIRE(ps[i] >= 0.0, InvalidArgument, "p_decay_fit: degrees must be non-negative");
        design(i, 0) = 1.0;
        design(i, 1) = mode == DecayMode::Bounded ? ps[i] : std::sqrt(ps[i]);
        logs[i] = std::log(errors[i]);
    }
    const Eigen::Vector2d coeffs = design.colPivHouseholderQr().solve(logs);
    const Eigen::VectorXd residual = logs - design * coeffs;
    const double ss_res = residual.squaredNorm();
    const double ss_tot = (logs.array() - logs.mean()).square().sum();
    DecayFit fit;
    fit.intercept = coeffs[0];
    fit.rate = -coeffs[1];
    fit.residual = std::sqrt(ss_res / static_cast<double>(n));
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace sndc
