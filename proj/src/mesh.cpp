#include "sndc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "sndc/error.hpp"

namespace sndc {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

SimplicialMesh::SimplicialMesh(std::vector<Eigen::Vector2d> vertices, std::vector<std::array<int, 3>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
    SNDC_REQUIRE(!cells_.empty(), InvalidArgument, "mesh has no cells");
    const int nv = num_vertices();

    diameters_.resize(cells_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        auto& cell = cells_[c];
        for (int v : cell) {
            SNDC_REQUIRE(v >= 0 && v < nv, InvalidArgument, fmt::format("cell {} references vertex {} out of range", c, v));
        }
        const double area = signed_area(vertices_[cell[0]], vertices_[cell[1]], vertices_[cell[2]]);
        SNDC_REQUIRE(area != 0.0 && std::isfinite(area), InvalidArgument, fmt::format("cell {} is degenerate", c));
        if (area < 0.0) std::swap(cell[1], cell[2]);
        double diam = 0.0;
        for (int e = 0; e < 3; ++e) {
            diam = std::max(diam, (vertices_[cell[(e + 1) % 3]] - vertices_[cell[e]]).norm());
        }
        diameters_[c] = diam;
        h_ = std::max(h_, diam);
    }

    // Edge multiplicity: 1 for boundary, 2 for interior, anything else is non-conforming.
    std::map<std::pair<int, int>, std::pair<int, int>> edges;  // key -> (count, owning cell * 3 + local edge)
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        for (int e = 0; e < 3; ++e) {
            auto key = edge_key(cells_[c][e], cells_[c][(e + 1) % 3]);
            auto [it, inserted] = edges.try_emplace(key, 0, static_cast<int>(c) * 3 + e);
            ++it->second.first;
            SNDC_REQUIRE(it->second.first <= 2, InvalidArgument,
                         fmt::format("edge ({}, {}) shared by more than two cells", key.first, key.second));
        }
    }

    boundary_vertex_.assign(vertices_.size(), 0);
    for (const auto& [key, info] : edges) {
        if (info.first != 1) continue;
        const int c = info.second / 3;
        const int e = info.second % 3;
        BoundaryEdge edge;
        edge.vertices = {cells_[c][e], cells_[c][(e + 1) % 3]};
        edge.cell = c;
        const Eigen::Vector2d d = vertices_[edge.vertices[1]] - vertices_[edge.vertices[0]];
        edge.length = d.norm();
        edge.tangent = d / edge.length;
        edge.normal = Eigen::Vector2d(edge.tangent.y(), -edge.tangent.x());
        edge.cell_diameter = diameters_[c];
        boundary_.push_back(edge);
        boundary_keys_.push_back(key);
        boundary_vertex_[key.first] = 1;
        boundary_vertex_[key.second] = 1;
    }
    // boundary_keys_ is sorted because std::map iterates in key order
}

double SimplicialMesh::cell_area(int c) const {
    const auto& cell = cells_[c];
    return signed_area(vertices_[cell[0]], vertices_[cell[1]], vertices_[cell[2]]);
}

bool SimplicialMesh::is_boundary_edge(int a, int b) const {
    return std::binary_search(boundary_keys_.begin(), boundary_keys_.end(), edge_key(a, b));
}

Eigen::AlignedBox2d SimplicialMesh::bounding_box() const {
    Eigen::AlignedBox2d box;
    for (const auto& v : vertices_) box.extend(v);
    return box;
}

SimplicialMesh build_structured_mesh(const Rectangle& domain, int n) {
    SNDC_REQUIRE(n >= 1, InvalidArgument, "structured mesh needs n >= 1");
    SNDC_REQUIRE(domain.x1 > domain.x0 && domain.y1 > domain.y0, InvalidArgument, "degenerate rectangle");

    std::vector<Eigen::Vector2d> vertices;
    vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            // endpoints hit exactly, interior points by linear blend
            const double x = i == n ? domain.x1 : domain.x0 + (domain.x1 - domain.x0) * i / n;
            const double y = j == n ? domain.y1 : domain.y0 + (domain.y1 - domain.y0) * j / n;
            vertices.emplace_back(x, y);
        }
    }
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::array<int, 3>> cells;
    cells.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return {std::move(vertices), std::move(cells)};
}

SimplicialMesh refine_uniform(const SimplicialMesh& mesh) {
    std::vector<Eigen::Vector2d> vertices = mesh.vertices();
    std::map<std::pair<int, int>, int> midpoints;
    auto midpoint = [&](int a, int b) {
        auto [it, inserted] = midpoints.try_emplace(edge_key(a, b), static_cast<int>(vertices.size()));
        if (inserted) vertices.push_back(0.5 * (mesh.vertices()[a] + mesh.vertices()[b]));
        return it->second;
    };
    std::vector<std::array<int, 3>> cells;
    cells.reserve(4 * mesh.cells().size());
    for (const auto& c : mesh.cells()) {
        const int m01 = midpoint(c[0], c[1]);
        const int m12 = midpoint(c[1], c[2]);
        const int m20 = midpoint(c[2], c[0]);
        cells.push_back({c[0], m01, m20});
        cells.push_back({m01, c[1], m12});
        cells.push_back({m20, m12, c[2]});
        cells.push_back({m01, m12, m20});
    }
    return {std::move(vertices), std::move(cells)};
}

std::vector<BoundaryEdge> boundary_edges(const SimplicialMesh& mesh) { return mesh.boundary_edges(); }

void write_mesh(std::ostream& os, const SimplicialMesh& mesh) {
    os << "sndc-mesh 1\n";
    os << "V " << mesh.num_vertices() << '\n';
    for (const auto& v : mesh.vertices()) os << fmt::format("{:a} {:a}\n", v.x(), v.y());
    os << "C " << mesh.num_cells() << '\n';
    for (const auto& c : mesh.cells()) os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
}

namespace {

double parse_double(const std::string& token) {
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    SNDC_REQUIRE(end != token.c_str() && *end == '\0', InvalidArgument, "bad number in mesh file: " + token);
    return value;
}

}  // namespace

SimplicialMesh read_mesh(std::istream& is) {
    std::string magic;
    int version = 0;
    is >> magic >> version;
    SNDC_REQUIRE(is && magic == "sndc-mesh" && version == 1, InvalidArgument, "not a sndc-mesh 1 file");

    std::string tag;
    long count = -1;
    is >> tag >> count;
    SNDC_REQUIRE(is && tag == "V" && count >= 3, InvalidArgument, "mesh file: bad vertex section");
    std::vector<Eigen::Vector2d> vertices(static_cast<std::size_t>(count));
    for (auto& v : vertices) {
        std::string x, y;
        is >> x >> y;
        SNDC_REQUIRE(is, InvalidArgument, "mesh file: truncated vertex list");
        v = {parse_double(x), parse_double(y)};
    }
    is >> tag >> count;
    SNDC_REQUIRE(is && tag == "C" && count >= 1, InvalidArgument, "mesh file: bad cell section");
    std::vector<std::array<int, 3>> cells(static_cast<std::size_t>(count));
    for (auto& c : cells) {
        is >> c[0] >> c[1] >> c[2];
        SNDC_REQUIRE(is, InvalidArgument, "mesh file: truncated cell list");
    }
    return {std::move(vertices), std::move(cells)};
}

Eigen::Vector3d barycentric(const SimplicialMesh& mesh, int c, const Eigen::Vector2d& p) {
    const Eigen::Vector2d a = mesh.cell_vertex(c, 0);
    Eigen::Matrix2d jac;
    jac.col(0) = mesh.cell_vertex(c, 1) - a;
    jac.col(1) = mesh.cell_vertex(c, 2) - a;
    const Eigen::Vector2d ref = jac.inverse() * (p - a);
    return {1.0 - ref.x() - ref.y(), ref.x(), ref.y()};
}

CellLocator::CellLocator(const SimplicialMesh& mesh) : mesh_(&mesh), box_(mesh.bounding_box()) {
    const int target = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.num_cells()) / 2.0)));
    nx_ = target;
    ny_ = target;
    buckets_.resize(static_cast<std::size_t>(nx_ * ny_));
    const Eigen::Vector2d size = box_.sizes();
    auto index = [&](double v, double lo, double extent, int count) {
        return std::clamp(static_cast<int>((v - lo) / extent * count), 0, count - 1);
    };
    for (int c = 0; c < mesh.num_cells(); ++c) {
        Eigen::AlignedBox2d cb;
        for (int l = 0; l < 3; ++l) cb.extend(mesh.cell_vertex(c, l));
        const int i0 = index(cb.min().x(), box_.min().x(), size.x(), nx_);
        const int i1 = index(cb.max().x(), box_.min().x(), size.x(), nx_);
        const int j0 = index(cb.min().y(), box_.min().y(), size.y(), ny_);
        const int j1 = index(cb.max().y(), box_.min().y(), size.y(), ny_);
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j * nx_ + i)].push_back(c);
        }
    }
}

int CellLocator::find(const Eigen::Vector2d& p, double tol) const {
    const Eigen::Vector2d size = box_.sizes();
    const int i = std::clamp(static_cast<int>((p.x() - box_.min().x()) / size.x() * nx_), 0, nx_ - 1);
    const int j = std::clamp(static_cast<int>((p.y() - box_.min().y()) / size.y() * ny_), 0, ny_ - 1);
    for (int c : buckets_[static_cast<std::size_t>(j * nx_ + i)]) {
        if (barycentric(*mesh_, c, p).minCoeff() >= -tol) return c;
    }
    return -1;
}

}  // namespace sndc
