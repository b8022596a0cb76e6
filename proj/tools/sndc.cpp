// Command-line driver: sndc solve|h-study|p-study|check --config <file>

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sndc/config.hpp"
#include "sndc/error.hpp"
#include "sndc/experiments.hpp"

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kAssumptionFailure = 3, kSolverFailure = 4 };

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic collocation with least-squares mixed finite elements for non-divergence elliptic problems"};
    app.require_subcommand(1, 1);

    std::string config_path;
    bool force = false;
    int threads = -1;
    std::string out_dir;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_flag("--force", force, "run even if the ellipticity/Cordes check fails");
        sub->add_option("--threads", threads, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);
        sub->add_option("--out", out_dir, "output directory (overrides SNDC_OUT and the config)");
    };
    auto* solve = app.add_subcommand("solve", "collocated solve; writes solution.sndc");
    auto* h_study = app.add_subcommand("h-study", "mesh refinement study; writes h_study.csv");
    auto* p_study = app.add_subcommand("p-study", "collocation degree study; writes p_study.csv");
    auto* check = app.add_subcommand("check", "ellipticity and Cordes report; writes check.csv");
    for (auto* sub : {solve, h_study, p_study, check}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        sndc::ExperimentConfig config = sndc::load_config(config_path);
        if (const char* env = std::getenv("SNDC_OUT"); env != nullptr && *env != '\0') config.out = env;
        if (!out_dir.empty()) config.out = out_dir;
        if (threads >= 0) config.threads = threads;

        sndc::RunOptions options;
        options.force = force;
        options.log = &std::cout;

        if (solve->parsed()) {
            sndc::run_solve(config, options);
        } else if (h_study->parsed()) {
            sndc::run_h_study(config, options);
        } else if (p_study->parsed()) {
            sndc::run_p_study(config, options);
        } else {
            const auto report = sndc::run_check(config, options);
            return report.passed ? kOk : kAssumptionFailure;
        }
        return kOk;
    } catch (const sndc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const sndc::AssumptionError& e) {
        std::cerr << "assumption failure: " << e.what() << '\n';
        return kAssumptionFailure;
    } catch (const sndc::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const sndc::InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
