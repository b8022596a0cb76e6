#include "sndc/collocation.hpp"

#include <fmt/format.h>

#include "sndc/error.hpp"
#include "sndc/parallel.hpp"

namespace sndc {

int global_index(std::span<const int> multi_index, std::span<const int> degrees) {
    SNDC_REQUIRE(multi_index.size() == degrees.size() && !degrees.empty(), InvalidArgument,
                 "global_index: multi-index and degree vector must have the same non-zero length");
    int m = 0;
    int stride = 1;
    for (std::size_t n = 0; n < degrees.size(); ++n) {
        SNDC_REQUIRE(degrees[n] >= 0, InvalidArgument, "global_index: negative degree");
        SNDC_REQUIRE(multi_index[n] >= 1 && multi_index[n] <= degrees[n] + 1, InvalidArgument,
                     fmt::format("global_index: component {} = {} outside [1, {}]", n + 1, multi_index[n], degrees[n] + 1));
        m += (multi_index[n] - 1) * stride;
        stride *= degrees[n] + 1;
    }
    return m + 1;
}

TensorCollocationGrid::TensorCollocationGrid(std::vector<GaussRule1D> rules) : rules_(std::move(rules)) {
    SNDC_REQUIRE(!rules_.empty(), InvalidArgument, "collocation grid needs at least one dimension");
    for (const auto& rule : rules_) {
        SNDC_REQUIRE(rule.size() >= 1, InvalidArgument, "collocation grid: empty rule");
        degrees_.push_back(rule.size() - 1);
        size_ *= rule.size();
    }
}

TensorCollocationGrid TensorCollocationGrid::for_problem(const ParametricProblem& problem, std::span<const int> degrees) {
    SNDC_REQUIRE(static_cast<int>(degrees.size()) == problem.num_dimensions(), InvalidArgument,
                 fmt::format("degree vector has {} entries, problem '{}' has {} random dimensions", degrees.size(),
                             problem.name, problem.num_dimensions()));
    std::vector<GaussRule1D> rules;
    for (std::size_t n = 0; n < degrees.size(); ++n) {
        SNDC_REQUIRE(degrees[n] >= 0, InvalidArgument, "collocation degree must be non-negative");
        const auto& dim = problem.dimensions[n];
        if (dim.family == GaussFamily::Custom) {
            SNDC_REQUIRE(dim.recurrence.has_value(), InvalidArgument, "custom dimension without a recurrence");
            rules.push_back(gauss_rule(*dim.recurrence, degrees[n] + 1));
        } else {
            rules.push_back(gauss_rule(dim.family, degrees[n] + 1));
        }
    }
    return TensorCollocationGrid(std::move(rules));
}

std::vector<int> TensorCollocationGrid::multi_index(int m) const {
    SNDC_REQUIRE(m >= 0 && m < size_, InvalidArgument, "collocation node index out of range");
    std::vector<int> idx(rules_.size());
    for (std::size_t n = 0; n < rules_.size(); ++n) {
        idx[n] = m % rules_[n].size();
        m /= rules_[n].size();
    }
    return idx;
}

Eigen::VectorXd TensorCollocationGrid::node(int m) const {
    const auto idx = multi_index(m);
    Eigen::VectorXd y(num_dimensions());
    for (int n = 0; n < num_dimensions(); ++n) y[n] = rules_[n].nodes[idx[n]];
    return y;
}

double TensorCollocationGrid::weight(int m) const {
    const auto idx = multi_index(m);
    double w = 1.0;
    for (int n = 0; n < num_dimensions(); ++n) w *= rules_[n].weights[idx[n]];
    return w;
}

double TensorCollocationGrid::lagrange(int m, const Eigen::VectorXd& y) const {
    const auto idx = multi_index(m);
    double value = 1.0;
    for (int n = 0; n < num_dimensions(); ++n) value *= lagrange_1d(rules_[n].nodes, idx[n], y[n]);
    return value;
}

Eigen::VectorXd TensorCollocationGrid::lagrange_all(const Eigen::VectorXd& y) const {
    SNDC_REQUIRE(y.size() == num_dimensions(), InvalidArgument, "lagrange_all: parameter dimension mismatch");
    std::vector<Eigen::VectorXd> per_dim;
    for (int n = 0; n < num_dimensions(); ++n) {
        Eigen::VectorXd v(rules_[n].size());
        for (int j = 0; j < rules_[n].size(); ++j) v[j] = lagrange_1d(rules_[n].nodes, j, y[n]);
        per_dim.push_back(std::move(v));
    }
    Eigen::VectorXd out(size_);
    for (int m = 0; m < size_; ++m) {
        int rest = m;
        double value = 1.0;
        for (int n = 0; n < num_dimensions(); ++n) {
            value *= per_dim[n][rest % rules_[n].size()];
            rest /= rules_[n].size();
        }
        out[m] = value;
    }
    return out;
}

CollocatedSolution collocate_solve(const ParametricProblem& problem, const TensorCollocationGrid& grid,
                                   std::shared_ptr<const FESpacePair> space, const CollocationOptions& options) {
    SNDC_REQUIRE(space != nullptr, InvalidArgument, "collocate_solve needs finite element spaces");
    SNDC_REQUIRE(grid.num_dimensions() == problem.num_dimensions(), InvalidArgument,
                 "collocation grid and problem disagree on the number of random dimensions");
    std::vector<int> order = options.order;
    if (order.empty()) {
        order.resize(static_cast<std::size_t>(grid.size()));
        for (int m = 0; m < grid.size(); ++m) order[m] = m;
    }
    SNDC_REQUIRE(static_cast<int>(order.size()) == grid.size(), InvalidArgument, "node order must list every node once");

    CollocatedSolution solution{grid, space, std::vector<DiscreteFieldPair>(static_cast<std::size_t>(grid.size()))};
    std::vector<char> done(static_cast<std::size_t>(grid.size()), 0);
    for (int m : order) {
        SNDC_REQUIRE(m >= 0 && m < grid.size() && !done[m], InvalidArgument, "node order must be a permutation");
        done[m] = 1;
    }

    parallel_for(grid.size(), options.threads, [&](int i) {
        const int m = order[i];
        try {
            const AssembledSystem system = assemble_parametric_system(*space, problem, grid.node(m), options.assembly);
            solution.nodes[m] = solve_deterministic(system, options.solver);
        } catch (const Error& e) {
            throw SolverError(fmt::format("collocation node {} (1-based {}): {}", m, m + 1, e.what()));
        }
    });
    return solution;
}

DiscreteFieldPair interpolate(const CollocatedSolution& solution, const Eigen::VectorXd& y) {
    return interpolate_nodal<DiscreteFieldPair>(solution.grid, solution.nodes, y);
}

DiscreteFieldPair expectation(const CollocatedSolution& solution, const std::function<double(const Eigen::VectorXd&)>& ratio) {
    if (!ratio) return expectation_nodal<DiscreteFieldPair>(solution.grid, solution.nodes, [](const auto&) { return 1.0; });
    return expectation_nodal<DiscreteFieldPair>(solution.grid, solution.nodes, ratio);
}

}  // namespace sndc
