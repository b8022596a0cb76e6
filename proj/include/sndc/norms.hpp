#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sndc/collocation.hpp"
#include "sndc/fem.hpp"

namespace sndc {

/// Parts of the mesh-dependent pair norm; total^2 = u^2 + g^2 + boundary^2.
struct PairNorm {
    double total = 0.0;
    double u = 0.0;         ///< ||grad phi||
    double g = 0.0;         ///< ||D psi||
    double boundary = 0.0;  ///< (||psi_t||^2_{dD} + sum_F h_{K,F}^{-1} ||psi_t||^2_F)^{1/2}
};

struct NormOptions {
    int volume_degree = 0;  ///< 0 selects 2k + 2
    int edge_degree = 0;    ///< 0 selects 2k + 2
};

PairNorm pair_norm_h_components(const FESpacePair& space, const DiscreteFieldPair& fields, const NormOptions& options = {});
double pair_norm_h(const FESpacePair& space, const DiscreteFieldPair& fields, const NormOptions& options = {});

/// Norm of (u - u_h, grad u - g_h) for a known strong solution at parameter y.
PairNorm pair_error_exact(const FESpacePair& space, const DiscreteFieldPair& fields, const ExactSolution& exact,
                          const Eigen::VectorXd& y, const NormOptions& options = {});

/// Exact embedding of a coarse P_k pair into a nested finer P_k' pair (k <= k').
class Prolongation {
public:
    /// Throws InvalidArgument if the fine mesh is not nested in the coarse one,
    /// the domains differ, or the fine degree is lower.
    Prolongation(const FESpacePair& coarse, const FESpacePair& fine);

    [[nodiscard]] bool is_identity() const { return identity_; }
    [[nodiscard]] DiscreteFieldPair apply(const DiscreteFieldPair& coarse) const;

private:
    bool identity_ = false;
    Eigen::SparseMatrix<double> to_u_;
    Eigen::SparseMatrix<double> to_g_;
};

struct ErrorRecord {
    std::string study;
    double h = 0.0;
    int k = 0;
    std::vector<int> p;
    double error = 0.0;
    double err_u = 0.0;
    double err_g = 0.0;
    double err_bnd = 0.0;
    double seconds = 0.0;
};

/// Gauss grid with max(p_a, p_b) + 2 points per dimension.
TensorCollocationGrid error_evaluation_grid(const ParametricProblem& problem, std::span<const int> p_a,
                                            std::span<const int> p_b);

/// error^2 = sum_j w_j ratio(y_j) ||I_p^ref(y_j) - P I_p^coarse(y_j)||^2 on the reference spaces.
ErrorRecord stochastic_error(const CollocatedSolution& coarse, const CollocatedSolution& reference,
                             const TensorCollocationGrid& eval_grid,
                             const std::function<double(const Eigen::VectorXd&)>& ratio = nullptr, int threads = 1,
                             const NormOptions& options = {});

/// Same quantity against a known strong solution of the problem.
ErrorRecord stochastic_error_exact(const CollocatedSolution& coarse, const ParametricProblem& problem,
                                   const TensorCollocationGrid& eval_grid, int threads = 1, const NormOptions& options = {});

/// order_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}).
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);

enum class DecayMode { Bounded, Unbounded };

struct DecayFit {
    double rate = 0.0;       ///< r in e ~ C exp(-r p^theta)
    double intercept = 0.0;  ///< log C
    double residual = 0.0;   ///< root-mean-square residual of the log fit
    double r_squared = 0.0;  ///< coefficient of determination of the log fit
};

/// Least-squares fit of log e against p (bounded) or sqrt(p) (unbounded).
DecayFit p_decay_fit(const std::vector<double>& errors, const std::vector<double>& ps, DecayMode mode);

}  // namespace sndc
