#include "sndc/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/LU>
#include <fmt/format.h>

#include "sndc/error.hpp"

namespace sndc {

LagrangeElement::LagrangeElement(int degree) : degree_(degree) {
    SNDC_REQUIRE(degree >= kMinDegree && degree <= kMaxDegree, InvalidArgument,
                 fmt::format("polynomial degree {} outside supported range [{}, {}]", degree, kMinDegree, kMaxDegree));
    const int n = (degree + 1) * (degree + 2) / 2;
    nodes_.resize(2, n);
    int idx = 0;
    for (int j = 0; j <= degree; ++j) {
        for (int i = 0; i + j <= degree; ++i, ++idx) {
            nodes_(0, idx) = static_cast<double>(i) / degree;
            nodes_(1, idx) = static_cast<double>(j) / degree;
            lattice_.push_back({degree - i - j, i, j});
        }
    }
    for (int total = 0; total <= degree; ++total) {
        for (int b = 0; b <= total; ++b) exponents_.push_back({total - b, b});
    }
    // Vandermonde V(i, m) = monomial m at node i; shape functions are columns of V^{-1}.
    Eigen::MatrixXd vandermonde(n, n);
    for (int i = 0; i < n; ++i) {
        for (int m = 0; m < n; ++m) {
            vandermonde(i, m) = std::pow(nodes_(0, i), exponents_[m][0]) * std::pow(nodes_(1, i), exponents_[m][1]);
        }
    }
    coefficients_ = vandermonde.fullPivLu().inverse();
}

Eigen::VectorXd LagrangeElement::values(const Eigen::Vector2d& ref) const {
    const int n = num_nodes();
    Eigen::VectorXd monomials(n);
    for (int m = 0; m < n; ++m) {
        monomials[m] = std::pow(ref.x(), exponents_[m][0]) * std::pow(ref.y(), exponents_[m][1]);
    }
    return coefficients_.transpose() * monomials;
}

Eigen::Matrix2Xd LagrangeElement::gradients(const Eigen::Vector2d& ref) const {
    const int n = num_nodes();
    Eigen::Matrix2Xd d(2, n);
    for (int m = 0; m < n; ++m) {
        const int a = exponents_[m][0];
        const int b = exponents_[m][1];
        d(0, m) = a == 0 ? 0.0 : a * std::pow(ref.x(), a - 1) * std::pow(ref.y(), b);
        d(1, m) = b == 0 ? 0.0 : b * std::pow(ref.x(), a) * std::pow(ref.y(), b - 1);
    }
    return d * coefficients_;
}

FESpacePair::FESpacePair(std::shared_ptr<const SimplicialMesh> mesh, int degree)
    : mesh_(std::move(mesh)), element_(degree) {
    SNDC_REQUIRE(mesh_ != nullptr, InvalidArgument, "FESpacePair needs a mesh");
    const int nl = element_.num_nodes();
    const auto& lattice = element_.lattice();

    // A lattice node is identified by the sorted (vertex, weight) pairs with
    // non-zero weight, so nodes on shared edges and vertices coincide.
    using Key = std::array<std::pair<int, int>, 3>;
    std::map<Key, int> ids;
    std::vector<Key> keys;
    cell_nodes_.resize(static_cast<std::size_t>(mesh_->num_cells() * nl));
    for (int c = 0; c < mesh_->num_cells(); ++c) {
        const auto& cell = mesh_->cells()[c];
        for (int l = 0; l < nl; ++l) {
            Key key;
            key.fill({-1, 0});
            int count = 0;
            for (int v = 0; v < 3; ++v) {
                if (lattice[l][v] > 0) key[count++] = {cell[v], lattice[l][v]};
            }
            std::sort(key.begin(), key.begin() + count);
            auto [it, inserted] = ids.try_emplace(key, static_cast<int>(keys.size()));
            if (inserted) keys.push_back(key);
            cell_nodes_[static_cast<std::size_t>(c * nl + l)] = it->second;
        }
    }

    const int nn = static_cast<int>(keys.size());
    coordinates_.resize(2, nn);
    u_index_.assign(static_cast<std::size_t>(nn), -1);
    for (int node = 0; node < nn; ++node) {
        const Key& key = keys[node];
        Eigen::Vector2d x = Eigen::Vector2d::Zero();
        int count = 0;
        for (const auto& [v, w] : key) {
            if (v < 0) continue;
            x += (static_cast<double>(w) / degree) * mesh_->vertices()[v];
            ++count;
        }
        if (count == 1) x = mesh_->vertices()[key[0].first];
        coordinates_.col(node) = x;
        bool on_boundary = false;
        if (count == 1) on_boundary = mesh_->is_boundary_vertex(key[0].first);
        if (count == 2) on_boundary = mesh_->is_boundary_edge(key[0].first, key[1].first);
        if (!on_boundary) {
            u_index_[node] = static_cast<int>(u_nodes_.size());
            u_nodes_.push_back(node);
        }
    }
}

ReferenceTabulation tabulate_reference(const LagrangeElement& element, const QuadratureRule& rule) {
    SNDC_REQUIRE(rule.dim == 2, InvalidArgument, "cell tabulation needs a triangle rule");
    ReferenceTabulation tab;
    tab.rule = rule;
    tab.values.resize(element.num_nodes(), rule.size());
    tab.gradients.reserve(static_cast<std::size_t>(rule.size()));
    for (int q = 0; q < rule.size(); ++q) {
        const Eigen::Vector2d p = rule.points.col(q);
        tab.values.col(q) = element.values(p);
        tab.gradients.push_back(element.gradients(p));
    }
    return tab;
}

namespace {

Eigen::Matrix2d cell_jacobian(const SimplicialMesh& mesh, int cell) {
    Eigen::Matrix2d jac;
    jac.col(0) = mesh.cell_vertex(cell, 1) - mesh.cell_vertex(cell, 0);
    jac.col(1) = mesh.cell_vertex(cell, 2) - mesh.cell_vertex(cell, 0);
    return jac;
}

}  // namespace

CellTabulation tabulate_basis(const FESpacePair& space, int cell, const ReferenceTabulation& ref) {
    const SimplicialMesh& mesh = space.mesh();
    SNDC_REQUIRE(cell >= 0 && cell < mesh.num_cells(), InvalidArgument, "tabulate_basis: cell out of range");
    const Eigen::Matrix2d jac = cell_jacobian(mesh, cell);
    const double det = jac.determinant();
    SNDC_REQUIRE(det != 0.0 && std::isfinite(det), InvalidArgument, fmt::format("cell {} has a degenerate Jacobian", cell));
    const Eigen::Matrix2d inv_t = jac.inverse().transpose();

    CellTabulation tab;
    const int nq = ref.rule.size();
    tab.points = (jac * ref.rule.points).colwise() + mesh.cell_vertex(cell, 0);
    tab.weights = ref.rule.weights * std::abs(det);
    tab.gradients.reserve(static_cast<std::size_t>(nq));
    for (int q = 0; q < nq; ++q) tab.gradients.push_back(inv_t * ref.gradients[q]);
    return tab;
}

OwnedCellTabulation tabulate_basis(const FESpacePair& space, int cell, const QuadratureRule& rule) {
    OwnedCellTabulation out;
    out.reference = tabulate_reference(space.element(), rule);
    out.cell = tabulate_basis(space, cell, out.reference);
    return out;
}

Eigen::VectorXd nodal_interpolate_scalar(const FESpacePair& space, const ScalarFunction& v) {
    Eigen::VectorXd coeffs(space.dim_u());
    for (int i = 0; i < space.dim_u(); ++i) coeffs[i] = v(space.node_coordinates().col(space.u_node(i)));
    return coeffs;
}

Eigen::VectorXd nodal_interpolate_vector(const FESpacePair& space, const VectorFunction& w) {
    Eigen::VectorXd coeffs(space.dim_g());
    for (int node = 0; node < space.num_nodes(); ++node) {
        const Eigen::Vector2d value = w(space.node_coordinates().col(node));
        coeffs[space.g_index(node, 0)] = value.x();
        coeffs[space.g_index(node, 1)] = value.y();
    }
    return coeffs;
}

Eigen::VectorXd local_u(const FESpacePair& space, const Eigen::VectorXd& u, int cell) {
    const int nl = space.nodes_per_cell();
    Eigen::VectorXd out(nl);
    for (int l = 0; l < nl; ++l) {
        const int i = space.u_index(space.cell_node(cell, l));
        out[l] = i < 0 ? 0.0 : u[i];
    }
    return out;
}

Eigen::Matrix2Xd local_g(const FESpacePair& space, const Eigen::VectorXd& g, int cell) {
    const int nl = space.nodes_per_cell();
    Eigen::Matrix2Xd out(2, nl);
    for (int l = 0; l < nl; ++l) {
        const int node = space.cell_node(cell, l);
        out(0, l) = g[space.g_index(node, 0)];
        out(1, l) = g[space.g_index(node, 1)];
    }
    return out;
}

Eigen::Vector2d to_reference(const SimplicialMesh& mesh, int cell, const Eigen::Vector2d& x) {
    return cell_jacobian(mesh, cell).inverse() * (x - mesh.cell_vertex(cell, 0));
}

double evaluate_u(const FESpacePair& space, const Eigen::VectorXd& u, int cell, const Eigen::Vector2d& x) {
    return local_u(space, u, cell).dot(space.element().values(to_reference(space.mesh(), cell, x)));
}

Eigen::Vector2d evaluate_g(const FESpacePair& space, const Eigen::VectorXd& g, int cell, const Eigen::Vector2d& x) {
    return local_g(space, g, cell) * space.element().values(to_reference(space.mesh(), cell, x));
}

}  // namespace sndc
