#include "sndc/coefficients.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "sndc/error.hpp"

namespace sndc {

using std::numbers::pi;

std::string_view to_string(Distribution d) { return d == Distribution::Uniform ? "uniform" : "gaussian"; }

Distribution distribution_from_string(std::string_view name) {
    if (name == "uniform") return Distribution::Uniform;
    if (name == "gaussian") return Distribution::Gaussian;
    throw InvalidArgument(fmt::format("unknown distribution '{}' (expected uniform or gaussian)", name));
}

GaussFamily gauss_family(Distribution d) {
    return d == Distribution::Uniform ? GaussFamily::LegendreUniform : GaussFamily::HermiteNormal;
}

ParameterDimension ParameterDimension::gaussian() {
    ParameterDimension dim;
    dim.family = GaussFamily::HermiteNormal;
    dim.lower = -std::numeric_limits<double>::infinity();
    dim.upper = std::numeric_limits<double>::infinity();
    return dim;
}

namespace {

ParameterDimension dimension_for(Distribution d) {
    return d == Distribution::Uniform ? ParameterDimension::uniform() : ParameterDimension::gaussian();
}

}  // namespace

double gamma_scaling(const ParametricProblem& problem, const Eigen::VectorXd& y, const Eigen::Vector2d& x) {
    return gamma_scaling(problem.diffusion(y, x));
}

EllipticityCordesReport check_assumptions(const ParametricProblem& problem, const std::vector<Eigen::Vector2d>& x_samples,
                                          const std::vector<Eigen::VectorXd>& y_samples) {
    SNDC_REQUIRE(!x_samples.empty() && !y_samples.empty(), InvalidArgument, "check_assumptions needs samples");
    constexpr int d = 2;
    EllipticityCordesReport report;
    report.x_samples = x_samples.size();
    report.y_samples = y_samples.size();
    report.lambda_est = std::numeric_limits<double>::infinity();
    bool positive = true;

    for (const auto& y : y_samples) {
        report.max_ratio_rho = std::max(report.max_ratio_rho, problem.density_ratio(y));
        for (const auto& x : x_samples) {
            const Eigen::Matrix2d a = problem.diffusion(y, x);
            const double scale = a.cwiseAbs().maxCoeff();
            SNDC_REQUIRE(std::abs(a(0, 1) - a(1, 0)) <= 1e-14 * scale, InvalidArgument,
                         fmt::format("diffusion matrix not symmetric at x = ({}, {})", x.x(), x.y()));
            const double trace = a.trace();
            SNDC_REQUIRE(trace > 0.0, InvalidArgument,
                         fmt::format("diffusion matrix has non-positive trace at x = ({}, {})", x.x(), x.y()));

            const double half_gap = std::hypot(0.5 * (a(0, 0) - a(1, 1)), a(0, 1));
            const Eigen::Vector2d eig(0.5 * trace - half_gap, 0.5 * trace + half_gap);
            if (eig[0] <= 0.0) positive = false;
            const double lambda = std::min(eig[0], eig[1] > 0.0 ? 1.0 / eig[1] : eig[0]);
            if (lambda < report.lambda_est) {
                report.lambda_est = lambda;
                report.worst_lambda_x = x;
                report.worst_lambda_y = y;
            }
            const double ratio = a.squaredNorm() / (trace * trace);
            if (ratio > report.max_cordes_ratio) {
                report.max_cordes_ratio = ratio;
                report.worst_epsilon_x = x;
                report.worst_epsilon_y = y;
            }
        }
    }
    report.lambda_est = std::min(report.lambda_est, 1.0);
    report.epsilon_est = 1.0 / report.max_cordes_ratio - (d - 1);
    report.passed = positive && report.lambda_est > 0.0 && report.epsilon_est > 0.0 &&
                    std::isfinite(report.max_ratio_rho);
    return report;
}

std::vector<Eigen::Vector2d> default_x_samples(const Rectangle& domain, int per_axis) {
    SNDC_REQUIRE(per_axis >= 2, InvalidArgument, "need at least two samples per axis");
    std::vector<Eigen::Vector2d> samples;
    samples.reserve(static_cast<std::size_t>(per_axis * per_axis));
    for (int j = 0; j < per_axis; ++j) {
        for (int i = 0; i < per_axis; ++i) {
            samples.emplace_back(domain.x0 + (domain.x1 - domain.x0) * i / (per_axis - 1),
                                 domain.y0 + (domain.y1 - domain.y0) * j / (per_axis - 1));
        }
    }
    return samples;
}

std::vector<Eigen::VectorXd> default_y_samples(const ParametricProblem& problem, int gauss_points) {
    constexpr double kGaussianCut = 8.0;
    std::vector<std::vector<double>> axes;
    for (const auto& dim : problem.dimensions) {
        std::vector<double> axis;
        const double lo = std::isfinite(dim.lower) ? dim.lower : -kGaussianCut;
        const double hi = std::isfinite(dim.upper) ? dim.upper : kGaussianCut;
        axis.push_back(lo);
        const GaussRule1D rule = dim.family == GaussFamily::Custom ? gauss_rule(*dim.recurrence, gauss_points)
                                                                   : gauss_rule(dim.family, gauss_points);
        for (int i = 0; i < rule.size(); ++i) axis.push_back(rule.nodes[i]);
        axis.push_back(hi);
        axes.push_back(std::move(axis));
    }
    std::vector<Eigen::VectorXd> samples{Eigen::VectorXd(0)};
    for (const auto& axis : axes) {
        std::vector<Eigen::VectorXd> next;
        next.reserve(samples.size() * axis.size());
        for (double v : axis) {
            for (const auto& s : samples) {
                Eigen::VectorXd y(s.size() + 1);
                y << s, v;
                next.push_back(std::move(y));
            }
        }
        samples = std::move(next);
    }
    return samples;
}

ParametricProblem section6_problem(Distribution distribution) {
    ParametricProblem problem;
    problem.name = distribution == Distribution::Uniform ? "section6-uniform" : "section6-gaussian";
    problem.dimensions = {dimension_for(distribution), dimension_for(distribution)};
    problem.diffusion = [](const Eigen::VectorXd& y, const Eigen::Vector2d& x) {
        const double s1 = std::exp(-y[0] * y[0] / 100.0);
        const double s2 = std::exp(-y[1] * y[1] / 100.0);
        Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
        a(0, 0) = 2.5 + s1 * (std::cos(pi * x.x()) + std::sin(pi * x.y()));
        a(1, 1) = 2.5 + s2 * (std::sin(pi * x.x()) + std::cos(pi * x.y()));
        return a;
    };
    problem.forcing = [](const Eigen::VectorXd&, const Eigen::Vector2d& x) {
        return (2.0 - x.x() * x.x() - x.y() * x.y()) / 8.0;
    };
    return problem;
}

ParametricProblem identity_problem(ExactSolution exact, std::string name, const Rectangle& domain,
                                   Distribution distribution, int dimensions) {
    SNDC_REQUIRE(dimensions >= 1, InvalidArgument, "a parametric problem needs at least one random dimension");
    ParametricProblem problem;
    problem.name = std::move(name);
    problem.domain = domain;
    problem.dimensions.assign(static_cast<std::size_t>(dimensions), dimension_for(distribution));
    problem.diffusion = [](const Eigen::VectorXd&, const Eigen::Vector2d&) -> Eigen::Matrix2d {
        return Eigen::Matrix2d::Identity();
    };
    problem.forcing = [hessian = exact.hessian](const Eigen::VectorXd& y, const Eigen::Vector2d& x) {
        return hessian(y, x).trace();
    };
    problem.exact = std::move(exact);
    return problem;
}

ParametricProblem manufactured_identity_problem(Distribution distribution, int dimensions) {
    ExactSolution exact;
    exact.u = [](const Eigen::VectorXd&, const Eigen::Vector2d& x) {
        return std::sin(pi * x.x()) * std::sin(pi * x.y());
    };
    exact.gradient = [](const Eigen::VectorXd&, const Eigen::Vector2d& x) -> Eigen::Vector2d {
        return {pi * std::cos(pi * x.x()) * std::sin(pi * x.y()), pi * std::sin(pi * x.x()) * std::cos(pi * x.y())};
    };
    exact.hessian = [](const Eigen::VectorXd&, const Eigen::Vector2d& x) -> Eigen::Matrix2d {
        const double s1 = std::sin(pi * x.x()), c1 = std::cos(pi * x.x());
        const double s2 = std::sin(pi * x.y()), c2 = std::cos(pi * x.y());
        Eigen::Matrix2d h;
        h << -pi * pi * s1 * s2, pi * pi * c1 * c2, pi * pi * c1 * c2, -pi * pi * s1 * s2;
        return h;
    };
    return identity_problem(std::move(exact), "manufactured-identity", {}, distribution, dimensions);
}

ParametricProblem problem_by_name(std::string_view name, std::optional<Distribution> distribution) {
    if (name == "section6-uniform" || name == "section6-gaussian") {
        const Distribution implied = name == "section6-uniform" ? Distribution::Uniform : Distribution::Gaussian;
        SNDC_REQUIRE(!distribution || *distribution == implied, InvalidArgument,
                     fmt::format("problem '{}' conflicts with distribution '{}'", name, to_string(*distribution)));
        return section6_problem(implied);
    }
    if (name == "section6") return section6_problem(distribution.value_or(Distribution::Uniform));
    if (name == "manufactured-identity") return manufactured_identity_problem(distribution.value_or(Distribution::Uniform));
    throw InvalidArgument(fmt::format("unknown problem '{}'", name));
}

}  // namespace sndc
