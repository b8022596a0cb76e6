#include <cmath>
#include <memory>
#include <numbers>

#include <gtest/gtest.h>

#include "sndc/error.hpp"
#include "sndc/norms.hpp"
#include "test_support.hpp"

namespace sndc {
namespace {

std::shared_ptr<const FESpacePair> square_space(int n, int k) {
    auto mesh = std::make_shared<const SimplicialMesh>(build_structured_mesh({-1.0, 1.0, -1.0, 1.0}, n));
    return std::make_shared<const FESpacePair>(mesh, k);
}

DiscreteFieldPair random_pair(const FESpacePair& space) {
    return {testing::random_vector(space.dim_u()), testing::random_vector(space.dim_g())};
}

TEST(PairNorm, ZeroPair) {
    const auto space = square_space(3, 2);
    EXPECT_EQ(pair_norm_h(*space, DiscreteFieldPair::zero(*space)), 0.0);
}

TEST(PairNorm, ConstantVectorOnSingleSquare) {
    // Only the two horizontal edges carry a tangential trace, each with weight 2 (1 + 1/(2 sqrt 2)).
    const auto space = square_space(1, 1);
    DiscreteFieldPair pair = DiscreteFieldPair::zero(*space);
    pair.g = nodal_interpolate_vector(*space, [](const Eigen::Vector2d&) { return Eigen::Vector2d(1.0, 0.0); });
    const PairNorm n = pair_norm_h_components(*space, pair);
    EXPECT_NEAR(n.total * n.total, 4.0 + std::numbers::sqrt2, 1e-13);
    EXPECT_EQ(n.u, 0.0);
    EXPECT_NEAR(n.g, 0.0, 1e-15);
}

TEST(PairNorm, GradientOfBubbleHasNoBoundaryTerm) {
    // psi = grad[(1 - x1^2)(1 - x2^2)] is cubic, so the cubic space holds it exactly.
    const auto space = square_space(2, 3);
    const ExactSolution ex = testing::bubble_solution();
    const Eigen::VectorXd y = Eigen::VectorXd::Zero(2);
    DiscreteFieldPair pair = DiscreteFieldPair::zero(*space);
    pair.g = nodal_interpolate_vector(*space, [&](const Eigen::Vector2d& x) { return ex.gradient(y, x); });
    const PairNorm n = pair_norm_h_components(*space, pair);
    EXPECT_LT(n.boundary, 1e-12);
    // |D psi|^2 integrated analytically: 2 * 4 * (16/15) * 2 + 32 * (2/3)^2
    EXPECT_NEAR(n.total * n.total, 1408.0 / 45.0, 1e-11);
}

TEST(PairNorm, ComponentsCombine) {
    const auto space = square_space(3, 2);
    const PairNorm n = pair_norm_h_components(*space, random_pair(*space));
    EXPECT_NEAR(n.total * n.total, n.u * n.u + n.g * n.g + n.boundary * n.boundary, 1e-12 * n.total * n.total);
}

TEST(PairNorm, NormAxioms) {
    const auto space = square_space(3, 2);
    for (int t = 0; t < 50; ++t) {
        const DiscreteFieldPair a = random_pair(*space);
        const DiscreteFieldPair b = random_pair(*space);
        const double s = testing::random_vector(1, 5.0)[0];
        const double na = pair_norm_h(*space, a);
        EXPECT_GT(na, 0.0);
        EXPECT_NEAR(pair_norm_h(*space, s * a), std::abs(s) * na, 1e-12 * std::abs(s) * na);
        EXPECT_LE(pair_norm_h(*space, a + b), na + pair_norm_h(*space, b) + 1e-12);
    }
}

TEST(PairNorm, OnlyGradientPartForFieldsWithoutBoundaryTrace) {
    const auto space = square_space(4, 2);
    DiscreteFieldPair pair = DiscreteFieldPair::zero(*space);
    pair.u = testing::random_vector(space->dim_u());
    const PairNorm n = pair_norm_h_components(*space, pair);
    EXPECT_EQ(n.boundary, 0.0);
    EXPECT_DOUBLE_EQ(n.total, n.u);
}

TEST(Prolongation, ExactEmbeddingOfNestedSpaces) {
    const auto coarse = square_space(4, 2);
    const auto fine = std::make_shared<const FESpacePair>(
        std::make_shared<const SimplicialMesh>(refine_uniform(coarse->mesh())), 3);
    const Prolongation prolong(*coarse, *fine);
    EXPECT_FALSE(prolong.is_identity());
    const DiscreteFieldPair a = random_pair(*coarse);
    const DiscreteFieldPair b = prolong.apply(a);
    const CellLocator cloc(coarse->mesh()), floc(fine->mesh());
    for (int t = 0; t < 200; ++t) {
        const Eigen::Vector2d x = testing::random_vector(2, 0.999);
        const int cc = cloc.find(x), fc = floc.find(x);
        EXPECT_NEAR(evaluate_u(*coarse, a.u, cc, x), evaluate_u(*fine, b.u, fc, x), 1e-13);
        EXPECT_LT((evaluate_g(*coarse, a.g, cc, x) - evaluate_g(*fine, b.g, fc, x)).norm(), 1e-13);
    }
    // the exact embedding leaves the norm of volume terms unchanged
    const PairNorm nc = pair_norm_h_components(*coarse, a);
    const PairNorm nf = pair_norm_h_components(*fine, b);
    EXPECT_NEAR(nc.u, nf.u, 1e-12 * nc.u);
    EXPECT_NEAR(nc.g, nf.g, 1e-12 * nc.g);
}

TEST(Prolongation, IdentityAndRejections) {
    const auto space = square_space(4, 2);
    EXPECT_TRUE(Prolongation(*space, *square_space(4, 2)).is_identity());
    EXPECT_THROW(Prolongation(*space, *square_space(4, 1)), InvalidArgument);
    EXPECT_THROW(Prolongation(*square_space(3, 1), *square_space(4, 1)), InvalidArgument);
    auto shifted = std::make_shared<const SimplicialMesh>(build_structured_mesh({-1.0, 1.5, -1.0, 1.0}, 8));
    EXPECT_THROW(Prolongation(*space, FESpacePair(shifted, 2)), InvalidArgument);
}

TEST(StochasticError, SelfErrorIsZeroAndPerturbationIsLinear) {
    const ParametricProblem problem = section6_problem(Distribution::Uniform);
    const auto space = square_space(4, 1);
    const std::vector<int> degrees{1, 1};
    const TensorCollocationGrid grid = TensorCollocationGrid::for_problem(problem, degrees);
    const CollocatedSolution sol = collocate_solve(problem, grid, space);
    const TensorCollocationGrid eval = error_evaluation_grid(problem, degrees, degrees);
    EXPECT_EQ(eval.size(), 9);
    EXPECT_EQ(stochastic_error(sol, sol, eval).error, 0.0);

    const DiscreteFieldPair delta = random_pair(*space);
    auto perturbed = [&](double s) {
        CollocatedSolution copy = sol;
        for (auto& node : copy.nodes) node += s * delta;
        return copy;
    };
    const double e1 = stochastic_error(perturbed(1e-3), sol, eval).error;
    const double e2 = stochastic_error(perturbed(2e-3), sol, eval).error;
    EXPECT_NEAR(e1, 1e-3 * pair_norm_h(*space, delta), 1e-12);
    EXPECT_NEAR(e2 / e1, 2.0, 1e-10);
}

TEST(StochasticError, ExactErrorOfInterpolantIsSmallForRepresentableSolution) {
    const ParametricProblem problem = identity_problem(testing::bubble_solution(), "bubble");
    const auto space = square_space(2, 4);
    const std::vector<int> degrees{0, 0};
    const CollocatedSolution sol = collocate_solve(problem, TensorCollocationGrid::for_problem(problem, degrees), space);
    const ErrorRecord r = stochastic_error_exact(sol, problem, error_evaluation_grid(problem, degrees, degrees));
    EXPECT_LT(r.error, 1e-9);
}

TEST(Eoc, Examples) {
    const std::vector<double> orders = eoc({1.0, 0.25, 0.0625}, {0.5, 0.25, 0.125});
    ASSERT_EQ(orders.size(), 2u);
    EXPECT_DOUBLE_EQ(orders[0], 2.0);
    EXPECT_DOUBLE_EQ(orders[1], 2.0);
    EXPECT_NEAR(eoc({1.0, 0.5}, {0.5, 0.25})[0], 1.0, 1e-15);
    EXPECT_THROW(eoc({1.0}, {0.5}), InvalidArgument);
    EXPECT_THROW(eoc({1.0, 0.0}, {0.5, 0.25}), InvalidArgument);
    EXPECT_THROW(eoc({1.0, 0.5}, {0.25, 0.5}), InvalidArgument);
}

TEST(DecayFit, RecoversExponentialRates) {
    std::vector<double> ps{0, 1, 2, 3, 4, 5}, bounded, unbounded;
    for (double p : ps) {
        bounded.push_back(3.0 * std::exp(-1.5 * p));
        unbounded.push_back(0.7 * std::exp(-2.0 * std::sqrt(p)));
    }
    const DecayFit fb = p_decay_fit(bounded, ps, DecayMode::Bounded);
    EXPECT_NEAR(fb.rate, 1.5, 1e-12);
    EXPECT_NEAR(fb.intercept, std::log(3.0), 1e-12);
    EXPECT_NEAR(fb.r_squared, 1.0, 1e-12);
    EXPECT_LT(fb.residual, 1e-12);
    const DecayFit fu = p_decay_fit(unbounded, ps, DecayMode::Unbounded);
    EXPECT_NEAR(fu.rate, 2.0, 1e-12);
    EXPECT_THROW(p_decay_fit({1.0, 0.5}, {0, 1}, DecayMode::Bounded), InvalidArgument);
    EXPECT_THROW(p_decay_fit({1.0, 0.5, -1.0}, {0, 1, 2}, DecayMode::Bounded), InvalidArgument);
}

}  // namespace
}  // namespace sndc
