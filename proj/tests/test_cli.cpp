#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sndc/archive.hpp"
#include "sndc/norms.hpp"

namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("sndc-cli-") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const std::string& name, const std::string& body) const {
        const fs::path path = dir_ / name;
        std::ofstream(path) << body;
        return path;
    }

    static int run(const std::string& args, const std::string& env = "") {
        const std::string cmd = env + " " + SNDC_CLI_PATH + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path dir_;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// CSV content without the timestamp comment line and without the trailing seconds column.
std::vector<std::string> deterministic_rows(const fs::path& path) {
    std::istringstream in(slurp(path));
    std::vector<std::string> rows;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line.front() == '#') continue;
        rows.push_back(line.substr(0, line.rfind(',')));
    }
    return rows;
}

std::vector<double> error_column(const fs::path& path) {
    std::vector<double> errors;
    const auto rows = deterministic_rows(path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream row(rows[i]);
        std::string cell;
        for (int c = 0; c <= 4; ++c) std::getline(row, cell, ',');
        errors.push_back(std::stod(cell));
    }
    return errors;
}

TEST_F(CliTest, ExitCodesForBadInput) {
    EXPECT_EQ(run("solve --config " + (dir_ / "missing.cfg").string()), 2);
    EXPECT_EQ(run("solve --config " + write_config("bad.cfg", "no_such_key = 1\n").string()), 2);
    EXPECT_EQ(run("solve --config " + write_config("p.cfg", "p = [1, 2, 3]\n").string()), 2);
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(CliTest, SolveWritesReproducibleArchive) {
    const fs::path cfg = write_config("solve.cfg", "problem = \"section6-uniform\"\nn = 8\nk = 1\np = [1, 1]\n"
                                                   "check_x_per_axis = 11\ncheck_y_gauss_points = 5\n");
    ASSERT_EQ(run("solve --config " + cfg.string() + " --out " + (dir_ / "a").string()), 0);
    ASSERT_EQ(run("solve --config " + cfg.string() + " --out " + (dir_ / "b").string() + " --threads 2"), 0);
    const sndc::SolutionArchive archive = sndc::load_archive(dir_ / "a" / "solution.sndc");
    EXPECT_EQ(archive.nodes.size(), 4u);
    EXPECT_EQ(archive.dim_u + archive.dim_g, 49 + 2 * 81);
    EXPECT_EQ(slurp(dir_ / "a" / "solution.sndc"), slurp(dir_ / "b" / "solution.sndc"));
}

TEST_F(CliTest, GaussianGridHasEightyOneNodes) {
    const fs::path cfg = write_config("g.cfg", "problem = \"section6-gaussian\"\nn = 4\nk = 1\np = [8, 8]\n"
                                               "check_x_per_axis = 11\ncheck_y_gauss_points = 5\n");
    ASSERT_EQ(run("solve --config " + cfg.string() + " --out " + dir_.string()), 0);
    const sndc::SolutionArchive archive = sndc::load_archive(dir_ / "solution.sndc");
    EXPECT_EQ(archive.nodes.size(), 81u);
    EXPECT_EQ(archive.p, (std::vector<int>{8, 8}));
}

TEST_F(CliTest, OutputDirectoryPrecedence) {
    const fs::path cfg = write_config("o.cfg", "problem = \"manufactured-identity\"\nn = 2\nk = 1\np = [0, 0]\n"
                                               "out = \"" + (dir_ / "from-config").string() + "\"\n"
                                               "check_x_per_axis = 5\ncheck_y_gauss_points = 3\n");
    ASSERT_EQ(run("check --config " + cfg.string()), 0);
    EXPECT_TRUE(fs::exists(dir_ / "from-config" / "check.csv"));
    ASSERT_EQ(run("check --config " + cfg.string(), "SNDC_OUT=" + (dir_ / "from-env").string()), 0);
    EXPECT_TRUE(fs::exists(dir_ / "from-env" / "check.csv"));
    ASSERT_EQ(run("check --config " + cfg.string() + " --out " + (dir_ / "from-flag").string(),
                  "SNDC_OUT=" + (dir_ / "ignored").string()),
              0);
    EXPECT_TRUE(fs::exists(dir_ / "from-flag" / "check.csv"));
    EXPECT_FALSE(fs::exists(dir_ / "ignored"));
}

TEST_F(CliTest, HStudyRatesForManufacturedSolution) {
    for (int k : {1, 2}) {
        const fs::path out = dir_ / ("k" + std::to_string(k));
        const fs::path cfg = write_config("h" + std::to_string(k) + ".cfg",
                                          "problem = \"manufactured-identity\"\nlevels = [4, 8, 16]\np = [1, 1]\n"
                                          "check_x_per_axis = 11\ncheck_y_gauss_points = 3\nk = " + std::to_string(k) + "\n");
        ASSERT_EQ(run("h-study --config " + cfg.string() + " --out " + out.string()), 0);
        const std::vector<double> errors = error_column(out / "h_study.csv");
        ASSERT_EQ(errors.size(), 3u);
        const std::vector<double> orders = sndc::eoc(errors, {0.5, 0.25, 0.125});
        EXPECT_GT(errors[0], errors[1]);
        EXPECT_GT(errors[1], errors[2]);
        EXPECT_NEAR(orders.back(), k, 0.15);
        EXPECT_TRUE(fs::exists(out / "h_study_eoc.csv"));
    }
}

TEST_F(CliTest, CsvOutputIsDeterministic) {
    const fs::path cfg = write_config("d.cfg", "problem = \"section6-uniform\"\nlevels = [2, 4]\nk = 1\np = [1, 1]\n"
                                               "ref_n = 8\nref_k = 2\nref_p = [2, 2]\n"
                                               "check_x_per_axis = 11\ncheck_y_gauss_points = 3\n");
    ASSERT_EQ(run("h-study --config " + cfg.string() + " --out " + (dir_ / "a").string()), 0);
    ASSERT_EQ(run("h-study --config " + cfg.string() + " --out " + (dir_ / "b").string() + " --threads 3"), 0);
    const auto a = deterministic_rows(dir_ / "a" / "h_study.csv");
    EXPECT_EQ(a, deterministic_rows(dir_ / "b" / "h_study.csv"));
    ASSERT_FALSE(a.empty());
    EXPECT_EQ(a.front(), "study,h,k,p,error,err_u,err_g,err_bnd");
    EXPECT_EQ(a.size(), 3u);
}

TEST_F(CliTest, PStudyRejectsCoarseReference) {
    const fs::path cfg = write_config("p.cfg", "problem = \"section6-uniform\"\nn = 4\nk = 1\np = [1, 1]\n"
                                               "p_sweep = [0, 1, 2]\nref_n = 4\nref_k = 1\nref_p = [1, 1]\n");
    EXPECT_EQ(run("p-study --config " + cfg.string() + " --out " + dir_.string()), 2);
}

}  // namespace
