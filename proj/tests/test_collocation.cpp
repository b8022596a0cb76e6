#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "sndc/collocation.hpp"
#include "sndc/error.hpp"
#include "test_support.hpp"

namespace sndc {
namespace {

std::shared_ptr<const FESpacePair> square_space(int n, int k) {
    auto mesh = std::make_shared<const SimplicialMesh>(build_structured_mesh({-1.0, 1.0, -1.0, 1.0}, n));
    return std::make_shared<const FESpacePair>(mesh, k);
}

int gi(std::vector<int> multi, std::vector<int> degrees) { return global_index(multi, degrees); }

TEST(GlobalIndex, Examples) {
    EXPECT_EQ(gi({1, 1}, {8, 8}), 1);
    EXPECT_EQ(gi({2, 1}, {8, 8}), 2);
    EXPECT_EQ(gi({1, 2}, {8, 8}), 10);
    EXPECT_EQ(gi({9, 9}, {8, 8}), 81);
    EXPECT_EQ(gi({2, 3, 2}, {2, 3, 1}), 2 + 2 * 3 + 1 * 12);
    EXPECT_EQ(gi({3, 4, 2}, {2, 3, 1}), 24);
}

TEST(GlobalIndex, RejectsOutOfRange) {
    EXPECT_THROW(gi({0, 1}, {2, 2}), InvalidArgument);
    EXPECT_THROW(gi({4, 1}, {2, 2}), InvalidArgument);
    EXPECT_THROW(gi({1}, {2, 2}), InvalidArgument);
    EXPECT_THROW(gi({1, 1}, {2, -1}), InvalidArgument);
}

TEST(GlobalIndex, BijectionForAllSmallDegreeVectors) {
    // every two-dimensional degree vector with at most 64 points per axis and N_p <= 10^4
    for (int p1 = 0; p1 < kMaxGaussPoints; ++p1) {
        for (int p2 = 0; p2 < kMaxGaussPoints && (p1 + 1) * (p2 + 1) <= 10000; ++p2) {
            const std::vector<int> degrees{p1, p2};
            const int np = (p1 + 1) * (p2 + 1);
            std::vector<char> seen(static_cast<std::size_t>(np), 0);
            for (int i2 = 1; i2 <= p2 + 1; ++i2) {
                for (int i1 = 1; i1 <= p1 + 1; ++i1) {
                    const std::array<int, 2> multi{i1, i2};
                    const int m = global_index(multi, degrees);
                    ASSERT_GE(m, 1);
                    ASSERT_LE(m, np);
                    ASSERT_FALSE(seen[m - 1]);
                    seen[m - 1] = 1;
                }
            }
        }
    }
    for (int p1 = 0; p1 <= 6; ++p1) {
        for (int p2 = 0; p2 <= 6; ++p2) {
            for (int p3 = 0; p3 <= 6; ++p3) {
                const std::vector<int> degrees{p1, p2, p3};
                const int np = (p1 + 1) * (p2 + 1) * (p3 + 1);
                std::vector<char> seen(static_cast<std::size_t>(np), 0);
                for (int i3 = 1; i3 <= p3 + 1; ++i3)
                    for (int i2 = 1; i2 <= p2 + 1; ++i2)
                        for (int i1 = 1; i1 <= p1 + 1; ++i1) {
                            const int m = gi({i1, i2, i3}, degrees);
                            ASSERT_FALSE(seen[m - 1]);
                            seen[m - 1] = 1;
                        }
            }
        }
    }
}

TEST(TensorGrid, CardinalityAndMultiIndexInverse) {
    const ParametricProblem p = section6_problem(Distribution::Uniform);
    const std::vector<int> degrees{3, 2};
    const TensorCollocationGrid grid = TensorCollocationGrid::for_problem(p, degrees);
    EXPECT_EQ(grid.size(), 12);
    for (int m = 0; m < grid.size(); ++m) {
        std::vector<int> multi = grid.multi_index(m);
        for (int& i : multi) ++i;
        EXPECT_EQ(global_index(multi, degrees), m + 1);
        EXPECT_EQ(grid.node(m)[0], grid.rules()[0].nodes[multi[0] - 1]);
        EXPECT_EQ(grid.node(m)[1], grid.rules()[1].nodes[multi[1] - 1]);
    }
    double total = 0.0;
    for (int m = 0; m < grid.size(); ++m) total += grid.weight(m);
    EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(TensorGrid, LagrangeBasisCardinalAndPartitionOfUnity) {
    const ParametricProblem p = section6_problem(Distribution::Gaussian);
    const std::vector<int> degrees{4, 3};
    const TensorCollocationGrid grid = TensorCollocationGrid::for_problem(p, degrees);
    for (int m = 0; m < grid.size(); ++m) {
        for (int l = 0; l < grid.size(); ++l) EXPECT_EQ(grid.lagrange(l, grid.node(m)), l == m ? 1.0 : 0.0);
    }
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd y = testing::random_vector(2, 3.0);
        EXPECT_NEAR(grid.lagrange_all(y).sum(), 1.0, 1e-11);
    }
}

TEST(TensorGrid, InterpolationExactForTensorPolynomials) {
    const ParametricProblem p = section6_problem(Distribution::Uniform);
    const std::vector<int> degrees{2, 1};
    const TensorCollocationGrid grid = TensorCollocationGrid::for_problem(p, degrees);
    auto v = [](const Eigen::VectorXd& y) { return y[0] * y[0] * y[1]; };
    std::vector<double> values;
    for (int m = 0; m < grid.size(); ++m) values.push_back(v(grid.node(m)));
    for (int t = 0; t < 50; ++t) {
        const Eigen::VectorXd y = testing::random_vector(2);
        EXPECT_NEAR(interpolate_nodal<double>(grid, values, y), v(y), 1e-12);
    }
    // idempotence: interpolating the surrogate again changes nothing
    std::vector<double> again;
    for (int m = 0; m < grid.size(); ++m) again.push_back(interpolate_nodal<double>(grid, values, grid.node(m)));
    for (int m = 0; m < grid.size(); ++m) EXPECT_NEAR(again[m], values[m], 1e-15);
}

TEST(TensorGrid, ExpectationOfPolynomials) {
    const ParametricProblem p = section6_problem(Distribution::Uniform);
    const std::vector<int> degrees{3, 3};
    const TensorCollocationGrid grid = TensorCollocationGrid::for_problem(p, degrees);
    auto mean = [&](auto f) {
        std::vector<double> values;
        for (int m = 0; m < grid.size(); ++m) values.push_back(f(grid.node(m)));
        return expectation_nodal<double>(grid, values, [](const Eigen::VectorXd&) { return 1.0; });
    };
    EXPECT_NEAR(mean([](const Eigen::VectorXd& y) { return y[0]; }), 0.0, 1e-14);
    EXPECT_NEAR(mean([](const Eigen::VectorXd& y) { return y[0] * y[0]; }), 1.0 / 3.0, 1e-13);
    EXPECT_NEAR(mean([](const Eigen::VectorXd& y) { return y[0] * y[0] * y[1] * y[1]; }), 1.0 / 9.0, 1e-13);
    EXPECT_NEAR(mean([](const Eigen::VectorXd&) { return 2.5; }), 2.5, 1e-14);
}

TEST(Collocation, ParameterIndependentProblemGivesIdenticalNodes) {
    const ParametricProblem problem = manufactured_identity_problem();
    const auto space = square_space(4, 2);
    const std::vector<int> degrees{2, 1};
    const CollocatedSolution sol = collocate_solve(problem, TensorCollocationGrid::for_problem(problem, degrees), space);
    ASSERT_EQ(sol.nodes.size(), 6u);
    for (const auto& node : sol.nodes) {
        EXPECT_EQ(node.u, sol.nodes[0].u);
        EXPECT_EQ(node.g, sol.nodes[0].g);
    }
    const DiscreteFieldPair mean = expectation(sol);
    EXPECT_LT((mean.u - sol.nodes[0].u).norm(), 1e-13 * sol.nodes[0].u.norm());
    const DiscreteFieldPair at = interpolate(sol, Eigen::Vector2d(0.3, -0.9));
    EXPECT_LT((at.g - sol.nodes[0].g).norm(), 1e-13 * sol.nodes[0].g.norm());
}

TEST(Collocation, SurrogateReproducesNodalSolutions) {
    const ParametricProblem problem = section6_problem(Distribution::Uniform);
    const auto space = square_space(4, 2);
    const std::vector<int> degrees{2, 2};
    const TensorCollocationGrid grid = TensorCollocationGrid::for_problem(problem, degrees);
    const CollocatedSolution sol = collocate_solve(problem, grid, space);
    EXPECT_EQ(sol.nodes.size(), 9u);
    for (int m = 0; m < grid.size(); ++m) {
        const DiscreteFieldPair at = interpolate(sol, grid.node(m));
        EXPECT_LT((at.u - sol.nodes[m].u).lpNorm<Eigen::Infinity>(), 1e-15 * std::max(1.0, sol.nodes[m].u.norm()) + 1e-16);
        EXPECT_LT((at.g - sol.nodes[m].g).lpNorm<Eigen::Infinity>(), 1e-15 * std::max(1.0, sol.nodes[m].g.norm()) + 1e-16);
        // each node is the deterministic solve at that parameter
        const DiscreteFieldPair direct = solve_deterministic(assemble_parametric_system(*space, problem, grid.node(m)));
        EXPECT_EQ(direct.u, sol.nodes[m].u);
    }
    // a constant density ratio of 2 doubles the mean
    const DiscreteFieldPair mean = expectation(sol);
    const DiscreteFieldPair twice = expectation(sol, [](const Eigen::VectorXd&) { return 2.0; });
    EXPECT_LT((twice.u - 2.0 * mean.u).norm(), 1e-14 * mean.u.norm());
}

TEST(Collocation, OrderAndThreadsDoNotChangeResults) {
    const ParametricProblem problem = section6_problem(Distribution::Gaussian);
    const auto space = square_space(4, 1);
    const std::vector<int> degrees{2, 1};
    const TensorCollocationGrid grid = TensorCollocationGrid::for_problem(problem, degrees);
    const CollocatedSolution forward = collocate_solve(problem, grid, space);
    CollocationOptions opts;
    opts.order = {5, 3, 1, 0, 2, 4};
    opts.threads = 3;
    const CollocatedSolution shuffled = collocate_solve(problem, grid, space, opts);
    for (int m = 0; m < grid.size(); ++m) {
        EXPECT_EQ(forward.nodes[m].u, shuffled.nodes[m].u);
        EXPECT_EQ(forward.nodes[m].g, shuffled.nodes[m].g);
    }
    opts.order = {0, 0, 1, 2, 3, 4};
    EXPECT_THROW(collocate_solve(problem, grid, space, opts), InvalidArgument);
}

TEST(Collocation, DimensionMismatchRejected) {
    const ParametricProblem problem = section6_problem(Distribution::Uniform);
    const std::vector<GaussRule1D> rules{gauss_rule(GaussFamily::LegendreUniform, 2)};
    EXPECT_THROW(collocate_solve(problem, TensorCollocationGrid(rules), square_space(2, 1)), InvalidArgument);
}

}  // namespace
}  // namespace sndc
