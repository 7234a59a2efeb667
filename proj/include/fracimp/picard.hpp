#pragma once

// The integral operator T whose fixed points solve the impulsive problem,
// and Picard iteration in the discrete Bielecki norm.

#include <cstddef>
#include <optional>
#include <vector>

#include "fracimp/fractional_calculus.hpp"
#include "fracimp/problem.hpp"

namespace fracimp {

struct SolverConfig {
    BieleckiWeight theta{1.0};
    double tolerance = 1e-10;      ///< Bielecki-norm step threshold
    double sup_tolerance = 0.0;    ///< unweighted step threshold; 0 means `tolerance`
    std::size_t max_iterations = 500;
    double grid_density = kDefaultGridDensity;
    std::size_t burn_in = 2;       ///< steps ignored by the geometric fit
};

struct SolveTrace {
    std::vector<double> steps;      ///< ||x_{k+1} - x_k||_PB
    std::vector<double> sup_steps;  ///< ||x_{k+1} - x_k||_inf
    double observed_ratio = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

struct SolveResult {
    PiecewiseFunction solution;
    SolveTrace trace;
};

/// T on a fixed grid layout. Differential branch i:
///   base_i + I^alpha_{sigma_i, tau} f(tau, x, int_{sigma_i}^tau h),
/// with base_0 = x0 and base_i the impulse branch value at sigma_i;
/// impulse branch i: I^beta_{tau_i, tau} h_i(tau, x).
class PicardOperator {
public:
    PicardOperator(ImpulsiveProblem problem, double grid_density = kDefaultGridDensity);

    /// Operator on the grid layout of an existing function (uniform segments).
    PicardOperator(ImpulsiveProblem problem, const PiecewiseFunction& layout);

    const ImpulsiveProblem& problem() const noexcept { return problem_; }
    double grid_density() const noexcept { return density_; }

    /// Zero function on this operator's layout.
    PiecewiseFunction zeros() const;

    /// x0 on differential branches, 0 on impulse branches.
    PiecewiseFunction initial_iterate() const;

    /// Throws StructureError when x does not share the layout and
    /// EvaluationError naming the branch and tau for non-finite values.
    PiecewiseFunction apply(const PiecewiseFunction& x) const;

private:
    ImpulsiveProblem problem_;
    double density_;
    PiecewiseFunction layout_;
    std::vector<UniformIntegrator> integrators_;
};

PiecewiseFunction apply_picard_operator(const ImpulsiveProblem& problem, const PiecewiseFunction& x);

/// Iterates T until both the Bielecki step and the sup step fall below
/// their thresholds. `initial` defaults to PicardOperator::initial_iterate;
/// when given, its grid layout is used instead of config.grid_density.
SolveResult solve_picard(const ImpulsiveProblem& problem, const SolverConfig& config,
                         const std::optional<PiecewiseFunction>& initial = std::nullopt);

/// ||Tx - x||_PB.
double fixed_point_residual(const ImpulsiveProblem& problem, const PiecewiseFunction& x,
                            BieleckiWeight theta);

/// exp of the least-squares slope of log(step_k) for k >= burn_in;
/// 0 when a step reaches exactly zero, NaN with fewer than two usable steps.
double geometric_ratio(const std::vector<double>& steps, std::size_t burn_in);

}  // namespace fracimp
