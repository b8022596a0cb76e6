#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sndc/assembly.hpp"
#include "sndc/coefficients.hpp"
#include "sndc/mesh.hpp"

namespace sndc {

/// Settings for one CLI run. Every key has a default; the defaults describe
/// a desk-scale version of the reference experiment.
///
/// File dialect: one `key = value` per line, `#` starts a comment, values
/// are numbers, double-quoted strings, `true`/`false`, or `[a, b, ...]`
/// arrays of numbers.
struct ExperimentConfig {
    std::string problem = "section6-uniform";
    std::optional<Distribution> distribution;
    Rectangle domain;
    int n = 16;                          ///< mesh subdivisions for `solve` and `p-study`
    std::vector<int> levels{8, 16, 32};  ///< mesh subdivisions for `h-study`
    int k = 2;
    std::vector<int> p{4, 4};
    std::vector<int> p_sweep{0, 1, 2, 3, 4};  ///< first-dimension degrees of the p-study
    int ref_n = 64;
    int ref_k = 3;
    std::vector<int> ref_p{6, 6};
    LinearSolver solver = LinearSolver::Cholesky;
    double cg_tolerance = 1e-12;
    int volume_quad_degree = 0;
    int edge_quad_degree = 0;
    int check_x_per_axis = 101;
    int check_y_gauss_points = 31;
    std::filesystem::path out = "sndc-out";
    int threads = 1;  ///< 0 means all hardware threads

    [[nodiscard]] AssemblyOptions assembly_options() const { return {volume_quad_degree, edge_quad_degree, true}; }
    [[nodiscard]] SolverOptions solver_options() const { return {solver, cg_tolerance, 0}; }
    [[nodiscard]] ParametricProblem make_problem() const { return problem_by_name(problem, distribution); }
};

/// Throws ConfigError naming the line for syntax errors, unknown keys and
/// out-of-range values.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Basic consistency of values that do not depend on the chosen study.
void validate(const ExperimentConfig& config);

}  // namespace sndc
