#include "sndc/archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <zlib.h>

#include "sndc/error.hpp"

namespace sndc {

static_assert(std::endian::native == std::endian::little, "archive payload assumes a little-endian host");

namespace {

std::string header_text(const SolutionArchive& a) {
    std::string out = fmt::format("sndc-solution {}\n", a.version);
    out += fmt::format("problem {}\n", a.problem);
    out += fmt::format("mesh structured {:a} {:a} {:a} {:a} {}\n", a.mesh.domain.x0, a.mesh.domain.x1, a.mesh.domain.y0,
                       a.mesh.domain.y1, a.mesh.n);
    out += fmt::format("space {} {} {}\n", a.k, a.dim_u, a.dim_g);
    out += fmt::format("grid {}", a.p.size());
    for (std::size_t n = 0; n < a.p.size(); ++n) out += fmt::format(" {} {}", to_string(a.families[n]), a.p[n]);
    out += fmt::format("\nnodes {}\n", a.nodes.size());
    return out;
}

std::string payload_bytes(const SolutionArchive& a) {
    std::string bytes;
    bytes.reserve(a.nodes.size() * static_cast<std::size_t>(a.dim_u + a.dim_g) * sizeof(double));
    for (const auto& node : a.nodes) {
        bytes.append(reinterpret_cast<const char*>(node.u.data()), static_cast<std::size_t>(node.u.size()) * sizeof(double));
        bytes.append(reinterpret_cast<const char*>(node.g.data()), static_cast<std::size_t>(node.g.size()) * sizeof(double));
    }
    return bytes;
}

std::uint32_t crc(const std::string& header, const std::string& payload) {
    uLong value = crc32(0L, Z_NULL, 0);
    value = crc32(value, reinterpret_cast<const Bytef*>(header.data()), static_cast<uInt>(header.size()));
    value = crc32(value, reinterpret_cast<const Bytef*>(payload.data()), static_cast<uInt>(payload.size()));
    return static_cast<std::uint32_t>(value);
}

double parse_hex(const std::string& token) {
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    SNDC_REQUIRE(end != token.c_str() && *end == '\0', InvalidArgument, "archive: bad number " + token);
    return value;
}

std::istringstream next_line(std::istream& is, const std::string& expected_tag) {
    std::string line;
    SNDC_REQUIRE(std::getline(is, line), InvalidArgument, "archive: truncated header, expected " + expected_tag);
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    SNDC_REQUIRE(tag == expected_tag, InvalidArgument, fmt::format("archive: expected '{}', found '{}'", expected_tag, tag));
    return ls;
}

}  // namespace

std::uint32_t SolutionArchive::checksum() const { return crc(header_text(*this), payload_bytes(*this)); }

bool SolutionArchive::same_descriptors(const SolutionArchive& other) const {
    return mesh == other.mesh && k == other.k && dim_u == other.dim_u && dim_g == other.dim_g &&
           families == other.families && p == other.p;
}

SolutionArchive make_archive(const CollocatedSolution& solution, const std::string& problem, const MeshDescriptor& mesh) {
    SolutionArchive a;
    a.problem = problem;
    a.mesh = mesh;
    a.k = solution.space->degree();
    a.dim_u = solution.space->dim_u();
    a.dim_g = solution.space->dim_g();
    for (const auto& rule : solution.grid.rules()) a.families.push_back(rule.family);
    a.p = solution.grid.degrees();
    a.nodes = solution.nodes;
    return a;
}

void write_archive(std::ostream& os, const SolutionArchive& archive) {
    for (const auto& node : archive.nodes) {
        SNDC_REQUIRE(node.u.size() == archive.dim_u && node.g.size() == archive.dim_g, InvalidArgument,
                     "archive: node block size does not match the space descriptor");
    }
    const std::string header = header_text(archive);
    const std::string payload = payload_bytes(archive);
    os << header << "payload " << payload.size() << '\n';
    os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    os << fmt::format("\nchecksum {:08x}\n", crc(header, payload));
}

SolutionArchive read_archive(std::istream& is) {
    SolutionArchive a;
    {
        auto ls = next_line(is, "sndc-solution");
        ls >> a.version;
        SNDC_REQUIRE(ls && a.version == 1, InvalidArgument, "archive: unsupported format version");
    }
    {
        auto ls = next_line(is, "problem");
        ls >> a.problem;
    }
    {
        auto ls = next_line(is, "mesh");
        std::string kind, x0, x1, y0, y1;
        ls >> kind >> x0 >> x1 >> y0 >> y1 >> a.mesh.n;
        SNDC_REQUIRE(ls && kind == "structured", InvalidArgument, "archive: bad mesh descriptor");
        a.mesh.domain = {parse_hex(x0), parse_hex(x1), parse_hex(y0), parse_hex(y1)};
    }
    {
        auto ls = next_line(is, "space");
        ls >> a.k >> a.dim_u >> a.dim_g;
        SNDC_REQUIRE(ls && a.dim_u >= 0 && a.dim_g >= 0, InvalidArgument, "archive: bad space descriptor");
    }
    {
        auto ls = next_line(is, "grid");
        std::size_t dims = 0;
        ls >> dims;
        for (std::size_t n = 0; n < dims; ++n) {
            std::string family;
            int p = -1;
            ls >> family >> p;
            SNDC_REQUIRE(ls && p >= 0, InvalidArgument, "archive: bad grid descriptor");
            a.families.push_back(gauss_family_from_string(family));
            a.p.push_back(p);
        }
    }
    std::size_t count = 0;
    {
        auto ls = next_line(is, "nodes");
        ls >> count;
        SNDC_REQUIRE(ls, InvalidArgument, "archive: bad node count");
    }
    std::size_t bytes = 0;
    {
        auto ls = next_line(is, "payload");
        ls >> bytes;
        const std::size_t expected = count * static_cast<std::size_t>(a.dim_u + a.dim_g) * sizeof(double);
        SNDC_REQUIRE(ls && bytes == expected, InvalidArgument, "archive: payload size does not match descriptors");
    }
    std::string payload(bytes, '\0');
    is.read(payload.data(), static_cast<std::streamsize>(bytes));
    SNDC_REQUIRE(static_cast<std::size_t>(is.gcount()) == bytes, InvalidArgument, "archive: truncated payload");
    std::string rest;
    std::getline(is, rest);  // newline after payload
    std::uint32_t stored = 0;
    {
        auto ls = next_line(is, "checksum");
        ls >> std::hex >> stored;
        SNDC_REQUIRE(ls, InvalidArgument, "archive: missing checksum");
    }

    const char* cursor = payload.data();
    a.nodes.resize(count);
    for (auto& node : a.nodes) {
        node.u.resize(a.dim_u);
        node.g.resize(a.dim_g);
        std::memcpy(node.u.data(), cursor, static_cast<std::size_t>(a.dim_u) * sizeof(double));
        cursor += static_cast<std::size_t>(a.dim_u) * sizeof(double);
        std::memcpy(node.g.data(), cursor, static_cast<std::size_t>(a.dim_g) * sizeof(double));
        cursor += static_cast<std::size_t>(a.dim_g) * sizeof(double);
    }
    SNDC_REQUIRE(crc(header_text(a), payload) == stored, InvalidArgument, "archive: checksum mismatch");
    return a;
}

void save_archive(const std::filesystem::path& path, const SolutionArchive& archive) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        SNDC_REQUIRE(os, InvalidArgument, "cannot write " + tmp.string());
        write_archive(os, archive);
        SNDC_REQUIRE(os, InvalidArgument, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

SolutionArchive load_archive(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    SNDC_REQUIRE(is, InvalidArgument, "cannot open " + path.string());
    return read_archive(is);
}

CollocatedSolution restore_solution(const SolutionArchive& archive, const ParametricProblem& problem) {
    SNDC_REQUIRE(static_cast<int>(archive.p.size()) == problem.num_dimensions(), InvalidArgument,
                 "archive grid does not match the problem's random dimensions");
    for (std::size_t n = 0; n < archive.p.size(); ++n) {
        SNDC_REQUIRE(archive.families[n] == problem.dimensions[n].family, InvalidArgument,
                     "archive quadrature family does not match the problem");
    }
    auto mesh = std::make_shared<const SimplicialMesh>(build_structured_mesh(archive.mesh.domain, archive.mesh.n));
    auto space = std::make_shared<const FESpacePair>(mesh, archive.k);
    SNDC_REQUIRE(space->dim_u() == archive.dim_u && space->dim_g() == archive.dim_g, InvalidArgument,
                 "archive space dimensions do not match the rebuilt spaces");
    TensorCollocationGrid grid = TensorCollocationGrid::for_problem(problem, archive.p);
    SNDC_REQUIRE(static_cast<int>(archive.nodes.size()) == grid.size(), InvalidArgument,
                 "archive node count does not match the grid");
    return {std::move(grid), std::move(space), archive.nodes};
}

}  // namespace sndc
