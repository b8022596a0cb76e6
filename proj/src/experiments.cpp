#include "sndc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <fstream>
#include <ostream>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "sndc/error.hpp"

namespace sndc {

namespace {

using Clock = std::chrono::steady_clock;

template <typename... Args>
void log(const RunOptions& options, fmt::format_string<Args...> format, Args&&... args) {
    if (options.log != nullptr) *options.log << fmt::format(format, std::forward<Args>(args)...) << std::flush;
}

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string timestamp() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        SNDC_REQUIRE(os, InvalidArgument, "cannot write " + tmp.string());
        os << content;
        SNDC_REQUIRE(os, InvalidArgument, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

struct Discretization {
    MeshDescriptor mesh;
    int k;
    std::vector<int> p;
};

CollocatedSolution solve_collocated(const ParametricProblem& problem, const Discretization& d, const ExperimentConfig& config) {
    auto mesh = std::make_shared<const SimplicialMesh>(build_structured_mesh(d.mesh.domain, d.mesh.n));
    auto space = std::make_shared<const FESpacePair>(mesh, d.k);
    CollocationOptions options;
    options.assembly = config.assembly_options();
    options.solver = config.solver_options();
    options.threads = config.threads;
    return collocate_solve(problem, TensorCollocationGrid::for_problem(problem, d.p), space, options);
}

std::string reference_file_name(const ParametricProblem& problem, const Discretization& d) {
    return fmt::format("reference-{}-n{}-k{}-p{}.sndc", problem.name, d.mesh.n, d.k, p_label(d.p));
}

// Loads the cached reference when its descriptors match, otherwise solves and caches it.
CollocatedSolution reference_solution(const ParametricProblem& problem, const Discretization& d,
                                      const ExperimentConfig& config, const RunOptions& options) {
    const std::filesystem::path path = config.out / reference_file_name(problem, d);
    if (std::filesystem::exists(path)) {
        try {
            const SolutionArchive archive = load_archive(path);
            if (archive.problem == problem.name && archive.mesh == d.mesh && archive.k == d.k && archive.p == d.p) {
                log(options, "reference: loaded {}\n", path.string());
                return restore_solution(archive, problem);
            }
        } catch (const InvalidArgument& e) {
            log(options, "reference: ignoring cached {} ({})\n", path.string(), e.what());
        }
    }
    log(options, "reference: solving n={} k={} p={}\n", d.mesh.n, d.k, p_label(d.p));
    const auto start = Clock::now();
    CollocatedSolution solution = solve_collocated(problem, d, config);
    std::filesystem::create_directories(config.out);
    save_archive(path, make_archive(solution, problem.name, d.mesh));
    log(options, "reference: {} nodes in {:.2f} s, cached at {}\n", solution.grid.size(), seconds_since(start), path.string());
    return solution;
}

void require_config(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

void check_reference_mesh(const ExperimentConfig& config, const std::vector<int>& levels, const RunOptions& options) {
    for (int n : levels) {
        require_config(config.ref_n % n == 0,
                       fmt::format("level n={} is not nested in the reference mesh n={}", n, config.ref_n));
        if (config.ref_n == n) log(options, "warning: reference mesh equals study mesh n={}\n", n);
    }
    require_config(config.ref_k >= config.k, "reference degree ref_k must be at least k");
}

DecayMode mode_for(const ParameterDimension& dim) {
    return std::isfinite(dim.lower) && std::isfinite(dim.upper) ? DecayMode::Bounded : DecayMode::Unbounded;
}

}  // namespace

std::string p_label(const std::vector<int>& p) { return fmt::format("{}", fmt::join(p, "x")); }

void write_error_csv(const std::filesystem::path& path, const std::string& study, const std::vector<ErrorRecord>& records) {
    std::string out = fmt::format("# sndc {} {}\n", study, timestamp());
    out += "study,h,k,p,error,err_u,err_g,err_bnd,seconds\n";
    for (const auto& r : records) {
        out += fmt::format("{},{:.17g},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.3f}\n", study, r.h, r.k, p_label(r.p),
                           r.error, r.err_u, r.err_g, r.err_bnd, r.seconds);
    }
    write_atomically(path, out);
}

EllipticityCordesReport check_admissible(const ParametricProblem& problem, const ExperimentConfig& config,
                                         const RunOptions& options) {
    const EllipticityCordesReport report =
        check_assumptions(problem, default_x_samples(problem.domain, config.check_x_per_axis),
                          default_y_samples(problem, config.check_y_gauss_points));
    log(options, "assumptions: lambda = {:.6f}, epsilon = {:.6f}, {}\n", report.lambda_est, report.epsilon_est,
        report.passed ? "pass" : "FAIL");
    if (!report.passed && !options.force) {
        throw AssumptionError(fmt::format("problem '{}' fails the ellipticity/Cordes check (lambda = {}, epsilon = {}); "
                                          "use --force to proceed",
                                          problem.name, report.lambda_est, report.epsilon_est));
    }
    return report;
}

SolveResult run_solve(const ExperimentConfig& config, const RunOptions& options) {
    validate(config);
    const ParametricProblem problem = config.make_problem();
    check_admissible(problem, config, options);
    const Discretization d{{problem.domain, config.n}, config.k, config.p};
    const auto start = Clock::now();
    const CollocatedSolution solution = solve_collocated(problem, d, config);
    SolveResult result{make_archive(solution, problem.name, d.mesh), config.out / "solution.sndc"};
    std::filesystem::create_directories(config.out);
    save_archive(result.path, result.archive);
    const DiscreteFieldPair mean = expectation(solution, problem.density_ratio);
    log(options, "solve: {} n={} k={} p={}: N_p = {}, N_hk = {}, {:.2f} s\n", problem.name, config.n, config.k,
        p_label(config.p), solution.grid.size(), solution.space->dim_total(), seconds_since(start));
    log(options, "solve: mean pair norm {:.10e}\n", pair_norm_h(*solution.space, mean));
    log(options, "solve: wrote {} (checksum {:08x})\n", result.path.string(), result.archive.checksum());
    return result;
}

HStudyResult run_h_study(const ExperimentConfig& config, const RunOptions& options) {
    validate(config);
    const ParametricProblem problem = config.make_problem();
    std::vector<int> levels = config.levels;
    std::sort(levels.begin(), levels.end());
    require_config(levels.size() >= 2, "h-study needs at least two mesh levels");
    require_config(std::adjacent_find(levels.begin(), levels.end()) == levels.end(), "h-study levels must be distinct");
    check_admissible(problem, config, options);

    std::optional<CollocatedSolution> reference;
    if (!problem.exact) {
        check_reference_mesh(config, levels, options);
        for (std::size_t n = 0; n < config.p.size(); ++n) {
            require_config(config.ref_p[n] >= config.p[n], "reference ref_p must dominate p componentwise");
        }
        reference = reference_solution(problem, {{problem.domain, config.ref_n}, config.ref_k, config.ref_p}, config, options);
    }

    HStudyResult result;
    for (int n : levels) {
        const auto start = Clock::now();
        const CollocatedSolution coarse = solve_collocated(problem, {{problem.domain, n}, config.k, config.p}, config);
        ErrorRecord record;
        if (reference) {
            record = stochastic_error(coarse, *reference, error_evaluation_grid(problem, config.p, config.ref_p),
                                      problem.density_ratio, config.threads);
        } else {
            record = stochastic_error_exact(coarse, problem, error_evaluation_grid(problem, config.p, config.p), config.threads);
        }
        record.study = "h";
        record.seconds = seconds_since(start);
        log(options, "h-study: n={:4d} h={:.6f} error={:.6e}\n", n, record.h, record.error);
        result.records.push_back(std::move(record));
    }
    std::vector<double> errors;
    std::vector<double> hs;
    for (const auto& r : result.records) {
        errors.push_back(r.error);
        hs.push_back(r.h);
    }
    result.orders = eoc(errors, hs);

    result.csv = config.out / "h_study.csv";
    write_error_csv(result.csv, "h", result.records);
    std::string table = "h_coarse,h_fine,eoc\n";
    for (std::size_t i = 0; i < result.orders.size(); ++i) {
        table += fmt::format("{:.17g},{:.17g},{:.6f}\n", hs[i], hs[i + 1], result.orders[i]);
        log(options, "h-study: EOC {:.6f} -> {:.6f}: {:.4f}\n", hs[i], hs[i + 1], result.orders[i]);
    }
    write_atomically(config.out / "h_study_eoc.csv", table);
    return result;
}

PStudyResult run_p_study(const ExperimentConfig& config, const RunOptions& options) {
    validate(config);
    const ParametricProblem problem = config.make_problem();
    std::vector<int> sweep = config.p_sweep;
    std::sort(sweep.begin(), sweep.end());
    require_config(sweep.size() >= 3, "p-study needs at least three swept degrees");
    require_config(std::adjacent_find(sweep.begin(), sweep.end()) == sweep.end(), "p-study degrees must be distinct");
    require_config(config.ref_p[0] >= sweep.back(), "reference grid is not finer than the study grids (ref_p[0] < max p_sweep)");
    for (std::size_t n = 1; n < config.p.size(); ++n) {
        require_config(config.ref_p[n] >= config.p[n], "reference grid is not finer than the study grids");
    }
    check_reference_mesh(config, {config.n}, options);
    check_admissible(problem, config, options);

    const CollocatedSolution reference =
        reference_solution(problem, {{problem.domain, config.ref_n}, config.ref_k, config.ref_p}, config, options);

    PStudyResult result;
    result.mode = mode_for(problem.dimensions[0]);
    for (int p1 : sweep) {
        std::vector<int> p = config.p;
        p[0] = p1;
        const auto start = Clock::now();
        const CollocatedSolution coarse = solve_collocated(problem, {{problem.domain, config.n}, config.k, p}, config);
        ErrorRecord record = stochastic_error(coarse, reference, error_evaluation_grid(problem, p, config.ref_p),
                                              problem.density_ratio, config.threads);
        record.study = "p";
        record.seconds = seconds_since(start);
        log(options, "p-study: p={} error={:.6e}\n", p_label(p), record.error);
        result.records.push_back(std::move(record));
    }
    std::vector<double> errors;
    std::vector<double> ps;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        errors.push_back(result.records[i].error);
        ps.push_back(sweep[i]);
    }
    result.csv = config.out / "p_study.csv";
    write_error_csv(result.csv, "p", result.records);
    // a zero error (y-independent data) leaves the log fit undefined
    if (std::all_of(errors.begin(), errors.end(), [](double e) { return e > 0.0; })) {
        result.fit = p_decay_fit(errors, ps, result.mode);
        log(options, "p-study: fitted rate {:.4f} ({} mode), R^2 = {:.4f}\n", result.fit.rate,
            result.mode == DecayMode::Bounded ? "bounded" : "unbounded", result.fit.r_squared);
    } else {
        log(options, "p-study: zero error encountered, decay fit skipped\n");
        result.fit = {0.0, 0.0, 0.0, 0.0};
    }
    write_atomically(config.out / "p_study_fit.csv",
                     fmt::format("mode,rate,intercept,residual,r_squared\n{},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                                 result.mode == DecayMode::Bounded ? "bounded" : "unbounded", result.fit.rate,
                                 result.fit.intercept, result.fit.residual, result.fit.r_squared));
    return result;
}

EllipticityCordesReport run_check(const ExperimentConfig& config, const RunOptions& options) {
    validate(config);
    const ParametricProblem problem = config.make_problem();
    RunOptions forced = options;
    forced.force = true;
    const EllipticityCordesReport report = check_admissible(problem, config, forced);
    log(options, "check: {} lambda_est={:.6f} epsilon_est={:.6f} max |A|^2/(tr A)^2={:.6f} samples {}x{} -> {}\n",
        problem.name, report.lambda_est, report.epsilon_est, report.max_cordes_ratio, report.x_samples, report.y_samples,
        report.passed ? "pass" : "fail");
    write_atomically(config.out / "check.csv",
                     fmt::format("problem,lambda_est,epsilon_est,max_cordes_ratio,x_samples,y_samples,passed\n"
                                 "{},{:.17g},{:.17g},{:.17g},{},{},{}\n",
                                 problem.name, report.lambda_est, report.epsilon_est, report.max_cordes_ratio,
                                 report.x_samples, report.y_samples, report.passed ? "true" : "false"));
    return report;
}

}  // namespace sndc
