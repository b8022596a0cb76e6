#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sndc {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rectangle {
    double x0 = -1.0;
    double x1 = 1.0;
    double y0 = -1.0;
    double y1 = 1.0;

    [[nodiscard]] double area() const { return (x1 - x0) * (y1 - y0); }
    [[nodiscard]] double perimeter() const { return 2.0 * ((x1 - x0) + (y1 - y0)); }
    friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

/// A boundary face F of the triangulation together with the geometry the
/// tangential-trace penalty needs.
struct BoundaryEdge {
    std::array<int, 2> vertices{};  ///< ordered so that the owning cell lies to the left
    int cell = -1;
    double length = 0.0;
    double cell_diameter = 0.0;     ///< h_{K,F}
    Eigen::Vector2d normal;         ///< outward unit normal
    Eigen::Vector2d tangent;        ///< unit tangent, (v1 - v0) / length
};

/// Conforming triangulation of a 2D polygonal domain. Cells are stored
/// counter-clockwise. Immutable once built.
class SimplicialMesh {
public:
    SimplicialMesh() = default;
    /// Builds derived data (orientation, diameters, boundary edges) and
    /// validates conformity. Throws InvalidArgument for degenerate or
    /// non-conforming input.
    SimplicialMesh(std::vector<Eigen::Vector2d> vertices, std::vector<std::array<int, 3>> cells);

    [[nodiscard]] const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<std::array<int, 3>>& cells() const { return cells_; }
    [[nodiscard]] const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }
    [[nodiscard]] const std::vector<double>& cell_diameters() const { return diameters_; }

    [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
    [[nodiscard]] int num_cells() const { return static_cast<int>(cells_.size()); }
    /// Maximum cell diameter.
    [[nodiscard]] double h() const { return h_; }

    [[nodiscard]] double cell_area(int c) const;
    [[nodiscard]] Eigen::Vector2d cell_vertex(int c, int local) const { return vertices_[cells_[c][local]]; }
    /// True if the vertex pair (a, b) is a boundary edge (either orientation).
    [[nodiscard]] bool is_boundary_edge(int a, int b) const;
    [[nodiscard]] bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
    [[nodiscard]] Eigen::AlignedBox2d bounding_box() const;

private:
    std::vector<Eigen::Vector2d> vertices_;
    std::vector<std::array<int, 3>> cells_;
    std::vector<double> diameters_;
    std::vector<BoundaryEdge> boundary_;
    std::vector<char> boundary_vertex_;
    std::vector<std::pair<int, int>> boundary_keys_;  // sorted (min, max)
    double h_ = 0.0;
};

/// Uniform n x n grid on the rectangle, each square split along the
/// (i, j) -> (i+1, j+1) diagonal.
SimplicialMesh build_structured_mesh(const Rectangle& domain, int n);

/// Red refinement: every cell split into four congruent children. Parent
/// vertices keep their indices; edge midpoints are appended.
SimplicialMesh refine_uniform(const SimplicialMesh& mesh);

/// Same as mesh.boundary_edges(); provided as a free function.
std::vector<BoundaryEdge> boundary_edges(const SimplicialMesh& mesh);

/// ASCII format: `sndc-mesh 1`, `V <n>` + coordinate lines, `C <n>` + index
/// triples. Coordinates are written as hex floats so a reload is bit-exact.
void write_mesh(std::ostream& os, const SimplicialMesh& mesh);
SimplicialMesh read_mesh(std::istream& is);

/// Locates cells by point through a uniform bucket grid over the bounding box.
class CellLocator {
public:
    explicit CellLocator(const SimplicialMesh& mesh);
    /// Index of a cell containing p (with tolerance), or -1.
    [[nodiscard]] int find(const Eigen::Vector2d& p, double tol = 1e-10) const;

private:
    const SimplicialMesh* mesh_;
    Eigen::AlignedBox2d box_;
    int nx_ = 1;
    int ny_ = 1;
    std::vector<std::vector<int>> buckets_;
};

/// Barycentric coordinates of p with respect to cell c.
Eigen::Vector3d barycentric(const SimplicialMesh& mesh, int c, const Eigen::Vector2d& p);

}  // namespace sndc
