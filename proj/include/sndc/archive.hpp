#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sndc/coefficients.hpp"
#include "sndc/collocation.hpp"
#include "sndc/mesh.hpp"

namespace sndc {

/// Structured mesh of `n` subdivisions per axis on `domain`.
struct MeshDescriptor {
    Rectangle domain;
    int n = 1;

    friend bool operator==(const MeshDescriptor&, const MeshDescriptor&) = default;
};

/// Persistent form of a CollocatedSolution.
///
/// Layout: a text header (`sndc-solution 1`, problem, mesh, space and grid
/// descriptors, `payload <bytes>`), the coefficient blocks as raw
/// little-endian doubles in node order ([u | g] per node), then a
/// `checksum <crc32>` line covering header and payload.
struct SolutionArchive {
    int version = 1;
    std::string problem;
    MeshDescriptor mesh;
    int k = 1;
    int dim_u = 0;
    int dim_g = 0;
    std::vector<GaussFamily> families;
    std::vector<int> p;
    std::vector<DiscreteFieldPair> nodes;

    /// CRC-32 of the serialized header and payload.
    [[nodiscard]] std::uint32_t checksum() const;
    /// True when mesh, space and grid descriptors agree.
    [[nodiscard]] bool same_descriptors(const SolutionArchive& other) const;
};

SolutionArchive make_archive(const CollocatedSolution& solution, const std::string& problem, const MeshDescriptor& mesh);

void write_archive(std::ostream& os, const SolutionArchive& archive);
/// Throws InvalidArgument on a malformed file or checksum mismatch.
SolutionArchive read_archive(std::istream& is);

void save_archive(const std::filesystem::path& path, const SolutionArchive& archive);
SolutionArchive load_archive(const std::filesystem::path& path);

/// Rebuilds mesh, spaces and grid for the archived descriptors.
CollocatedSolution restore_solution(const SolutionArchive& archive, const ParametricProblem& problem);

}  // namespace sndc
