#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sndc/archive.hpp"
#include "sndc/coefficients.hpp"
#include "sndc/config.hpp"
#include "sndc/norms.hpp"

namespace sndc {

struct RunOptions {
    bool force = false;            ///< proceed even if the assumption check fails
    std::ostream* log = nullptr;   ///< progress and tables; nullptr for silence
};

/// Samples A on the configured grids. Throws AssumptionError when the check
/// fails and `force` is not set.
EllipticityCordesReport check_admissible(const ParametricProblem& problem, const ExperimentConfig& config,
                                         const RunOptions& options);

struct SolveResult {
    SolutionArchive archive;
    std::filesystem::path path;
};

/// Collocated solve on the `n`, `k`, `p` discretization; writes `solution.sndc`.
SolveResult run_solve(const ExperimentConfig& config, const RunOptions& options = {});

struct HStudyResult {
    std::vector<ErrorRecord> records;  ///< coarse to fine
    std::vector<double> orders;        ///< EOC between consecutive levels
    std::filesystem::path csv;
};

/// Error per mesh level against the analytic solution when the problem has
/// one, otherwise against a (cached) reference solve. Writes `h_study.csv`
/// and `h_study_eoc.csv`.
HStudyResult run_h_study(const ExperimentConfig& config, const RunOptions& options = {});

struct PStudyResult {
    std::vector<ErrorRecord> records;  ///< ordered by the swept degree
    DecayFit fit;
    DecayMode mode = DecayMode::Bounded;
    std::filesystem::path csv;
};

/// Sweeps the first collocation degree over `p_sweep` with the remaining
/// degrees pinned to `p`. Writes `p_study.csv` and `p_study_fit.csv`.
PStudyResult run_p_study(const ExperimentConfig& config, const RunOptions& options = {});

/// Assumption report; writes `check.csv`. Never throws AssumptionError.
EllipticityCordesReport run_check(const ExperimentConfig& config, const RunOptions& options = {});

/// `study,h,k,p,error,err_u,err_g,err_bnd,seconds`, preceded by one
/// `# sndc <study> <timestamp>` line. Written through a temporary file and renamed.
void write_error_csv(const std::filesystem::path& path, const std::string& study, const std::vector<ErrorRecord>& records);

/// Degree vector label used in CSV files, e.g. "3x8".
std::string p_label(const std::vector<int>& p);

}  // namespace sndc
