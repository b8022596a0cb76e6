#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "sndc/mesh.hpp"
#include "sndc/quadrature.hpp"

namespace sndc {

inline constexpr int kMinDegree = 1;
inline constexpr int kMaxDegree = 4;

/// Lagrange P_k element on the reference triangle with the uniform lattice
/// of nodes (i/k, j/k), i + j <= k. Shape functions are expanded in the
/// monomial basis x^a y^b, a + b <= k.
class LagrangeElement {
public:
    explicit LagrangeElement(int degree);

    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int num_nodes() const { return static_cast<int>(nodes_.cols()); }
    [[nodiscard]] const Eigen::Matrix2Xd& nodes() const { return nodes_; }
    /// Integer barycentric coordinates (w.r.t. vertices 0, 1, 2) of node i; they sum to k.
    [[nodiscard]] const std::vector<std::array<int, 3>>& lattice() const { return lattice_; }

    /// Shape function values at a reference point.
    [[nodiscard]] Eigen::VectorXd values(const Eigen::Vector2d& ref) const;
    /// Reference gradients, one column per shape function.
    [[nodiscard]] Eigen::Matrix2Xd gradients(const Eigen::Vector2d& ref) const;

private:
    int degree_;
    Eigen::Matrix2Xd nodes_;
    std::vector<std::array<int, 3>> lattice_;
    std::vector<std::array<int, 2>> exponents_;
    Eigen::MatrixXd coefficients_;  // column i: monomial coefficients of shape function i
};

/// Scalar space U (P_k, zero trace on the boundary) and vector space
/// G = [P_k]^2 (unconstrained) on a common lattice of global nodes.
///
/// Unknown layout of a coupled vector: [u (dim_u) | g_1 (num_nodes) | g_2 (num_nodes)].
class FESpacePair {
public:
    FESpacePair(std::shared_ptr<const SimplicialMesh> mesh, int degree);

    [[nodiscard]] const SimplicialMesh& mesh() const { return *mesh_; }
    [[nodiscard]] const std::shared_ptr<const SimplicialMesh>& mesh_ptr() const { return mesh_; }
    [[nodiscard]] int degree() const { return element_.degree(); }
    [[nodiscard]] const LagrangeElement& element() const { return element_; }

    [[nodiscard]] int num_nodes() const { return static_cast<int>(coordinates_.cols()); }
    [[nodiscard]] int nodes_per_cell() const { return element_.num_nodes(); }
    [[nodiscard]] const Eigen::Matrix2Xd& node_coordinates() const { return coordinates_; }
    /// Global node of local lattice node `local` of cell `cell`.
    [[nodiscard]] int cell_node(int cell, int local) const {
        return cell_nodes_[static_cast<std::size_t>(cell * nodes_per_cell() + local)];
    }
    [[nodiscard]] bool is_constrained(int node) const { return u_index_[node] < 0; }
    /// Index of node in the U coefficient vector, -1 for boundary nodes.
    [[nodiscard]] int u_index(int node) const { return u_index_[node]; }
    /// Global node carrying U unknown i.
    [[nodiscard]] int u_node(int i) const { return u_nodes_[i]; }
    [[nodiscard]] int g_index(int node, int component) const { return component * num_nodes() + node; }

    [[nodiscard]] int dim_u() const { return static_cast<int>(u_nodes_.size()); }
    [[nodiscard]] int dim_g() const { return 2 * num_nodes(); }
    [[nodiscard]] int dim_total() const { return dim_u() + dim_g(); }

private:
    std::shared_ptr<const SimplicialMesh> mesh_;
    LagrangeElement element_;
    Eigen::Matrix2Xd coordinates_;
    std::vector<int> cell_nodes_;
    std::vector<int> u_index_;
    std::vector<int> u_nodes_;
};

/// Coefficients of a pair (u, g) in U x G.
struct DiscreteFieldPair {
    Eigen::VectorXd u;
    Eigen::VectorXd g;

    static DiscreteFieldPair zero(const FESpacePair& space) {
        return {Eigen::VectorXd::Zero(space.dim_u()), Eigen::VectorXd::Zero(space.dim_g())};
    }
    DiscreteFieldPair& operator+=(const DiscreteFieldPair& o) { u += o.u; g += o.g; return *this; }
    DiscreteFieldPair& operator-=(const DiscreteFieldPair& o) { u -= o.u; g -= o.g; return *this; }
    DiscreteFieldPair& operator*=(double s) { u *= s; g *= s; return *this; }
    friend DiscreteFieldPair operator-(DiscreteFieldPair a, const DiscreteFieldPair& b) { return a -= b; }
    friend DiscreteFieldPair operator+(DiscreteFieldPair a, const DiscreteFieldPair& b) { return a += b; }
    friend DiscreteFieldPair operator*(double s, DiscreteFieldPair a) { return a *= s; }
};

/// Reference-cell shape data at the points of a rule; shared by all cells.
struct ReferenceTabulation {
    QuadratureRule rule;
    Eigen::MatrixXd values;                  // nodes x points
    std::vector<Eigen::Matrix2Xd> gradients; // per point: 2 x nodes
};

ReferenceTabulation tabulate_reference(const LagrangeElement& element, const QuadratureRule& rule);

/// Physical shape data on one cell. Shape values are affine-invariant and
/// stay in ReferenceTabulation::values.
struct CellTabulation {
    Eigen::Matrix2Xd points;                 // physical quadrature points
    Eigen::VectorXd weights;                 // reference weights times |det J|
    std::vector<Eigen::Matrix2Xd> gradients; // per point: physical gradients, 2 x nodes
};

CellTabulation tabulate_basis(const FESpacePair& space, int cell, const ReferenceTabulation& ref);
/// Convenience overload bundling the reference data.
struct OwnedCellTabulation {
    ReferenceTabulation reference;
    CellTabulation cell;
};
OwnedCellTabulation tabulate_basis(const FESpacePair& space, int cell, const QuadratureRule& rule);

using ScalarFunction = std::function<double(const Eigen::Vector2d&)>;
using VectorFunction = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// I_U v: nodal values at the unconstrained lattice nodes.
Eigen::VectorXd nodal_interpolate_scalar(const FESpacePair& space, const ScalarFunction& v);
/// I_G w: componentwise nodal values at every lattice node.
Eigen::VectorXd nodal_interpolate_vector(const FESpacePair& space, const VectorFunction& w);

/// Local coefficients of the scalar field on a cell (boundary nodes are zero).
Eigen::VectorXd local_u(const FESpacePair& space, const Eigen::VectorXd& u, int cell);
/// Local coefficients of the vector field on a cell, 2 x nodes_per_cell.
Eigen::Matrix2Xd local_g(const FESpacePair& space, const Eigen::VectorXd& g, int cell);

/// Point evaluation of u at a physical point inside `cell`.
double evaluate_u(const FESpacePair& space, const Eigen::VectorXd& u, int cell, const Eigen::Vector2d& x);
Eigen::Vector2d evaluate_g(const FESpacePair& space, const Eigen::VectorXd& g, int cell, const Eigen::Vector2d& x);

/// Reference coordinates of a physical point in `cell`.
Eigen::Vector2d to_reference(const SimplicialMesh& mesh, int cell, const Eigen::Vector2d& x);

}  // namespace sndc
