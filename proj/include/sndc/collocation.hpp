#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sndc/assembly.hpp"
#include "sndc/coefficients.hpp"
#include "sndc/fem.hpp"
#include "sndc/gauss_rule.hpp"

namespace sndc {

/// m = m_1 + sum_{i=1}^{N-1} (m_{i+1} - 1) prod_{j<=i} (p_j + 1), all indices 1-based.
/// Throws InvalidArgument if some m_n is outside [1, p_n + 1].
int global_index(std::span<const int> multi_index, std::span<const int> degrees);

/// Tensor product of 1D Gauss rules. Node m (0-based here) has multi-index
/// given by the first dimension varying fastest, matching global_index - 1.
class TensorCollocationGrid {
public:
    explicit TensorCollocationGrid(std::vector<GaussRule1D> rules);

    /// One rule with p_n + 1 points per random dimension of the problem.
    static TensorCollocationGrid for_problem(const ParametricProblem& problem, std::span<const int> degrees);

    [[nodiscard]] int num_dimensions() const { return static_cast<int>(rules_.size()); }
    [[nodiscard]] const std::vector<GaussRule1D>& rules() const { return rules_; }
    [[nodiscard]] const std::vector<int>& degrees() const { return degrees_; }
    /// N_p = prod (p_n + 1).
    [[nodiscard]] int size() const { return size_; }

    [[nodiscard]] std::vector<int> multi_index(int m) const;  ///< 0-based components
    [[nodiscard]] Eigen::VectorXd node(int m) const;
    [[nodiscard]] double weight(int m) const;

    /// l_m(y) = prod_n l_{n, m_n}(y_n).
    [[nodiscard]] double lagrange(int m, const Eigen::VectorXd& y) const;
    /// All N_p basis values at y.
    [[nodiscard]] Eigen::VectorXd lagrange_all(const Eigen::VectorXd& y) const;

private:
    std::vector<GaussRule1D> rules_;
    std::vector<int> degrees_;
    int size_ = 1;
};

/// Per-node solutions of the parametric problem on a fixed pair of spaces.
struct CollocatedSolution {
    TensorCollocationGrid grid;
    std::shared_ptr<const FESpacePair> space;
    std::vector<DiscreteFieldPair> nodes;
};

struct CollocationOptions {
    AssemblyOptions assembly;
    SolverOptions solver;
    int threads = 1;
    /// Processing order of the nodes; empty means 0, 1, ..., N_p - 1.
    std::vector<int> order;
};

/// Solves the N_p decoupled systems. Results depend only on the node, not on
/// the processing order or thread count. Per-node failures are rethrown as
/// SolverError naming the node.
CollocatedSolution collocate_solve(const ParametricProblem& problem, const TensorCollocationGrid& grid,
                                   std::shared_ptr<const FESpacePair> space, const CollocationOptions& options = {});

/// I_p applied to any vector-space valued nodal data.
template <typename T>
T interpolate_nodal(const TensorCollocationGrid& grid, std::span<const T> values, const Eigen::VectorXd& y) {
    const Eigen::VectorXd ell = grid.lagrange_all(y);
    T out = ell[0] * values[0];
    for (int m = 1; m < grid.size(); ++m) out += ell[m] * values[m];
    return out;
}

/// sum_m ratio(y_m) w_m v(y_m).
template <typename T, typename Ratio>
T expectation_nodal(const TensorCollocationGrid& grid, std::span<const T> values, Ratio&& ratio) {
    T out = (ratio(grid.node(0)) * grid.weight(0)) * values[0];
    for (int m = 1; m < grid.size(); ++m) out += (ratio(grid.node(m)) * grid.weight(m)) * values[m];
    return out;
}

DiscreteFieldPair interpolate(const CollocatedSolution& solution, const Eigen::VectorXd& y);

/// Mean of the collocated pair; `ratio` is rho / rho_hat (identically one by default).
DiscreteFieldPair expectation(const CollocatedSolution& solution,
                              const std::function<double(const Eigen::VectorXd&)>& ratio = nullptr);

}  // namespace sndc
