#include "fracimp/picard.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "fracimp/errors.hpp"

namespace fracimp {

namespace {

[[noreturn]] void non_finite(const BranchTag& tag, double tau, const char* what) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " is not finite on the " << branch_name(tag.branch) << " branch " << tag.index
        << " at tau = " << tau;
    throw EvaluationError(msg.str());
}

}  // namespace

PicardOperator::PicardOperator(ImpulsiveProblem problem, double grid_density)
    : PicardOperator(problem, PiecewiseFunction::zeros(problem.partition, grid_density)) {
    density_ = grid_density;
}

PicardOperator::PicardOperator(ImpulsiveProblem problem, const PiecewiseFunction& layout)
    : problem_(std::move(problem)), density_(0.0), layout_(layout.map([](double, double) { return 0.0; })) {
    validate_problem(problem_);
    if (!(layout_.partition() == problem_.partition)) {
        throw StructureError("PicardOperator: layout partition differs from the problem partition");
    }
    for (const auto& seg : layout_.segments()) {
        if (!seg.samples.grid().is_uniform()) {
            throw StructureError("PicardOperator: segment grids must be uniform");
        }
    }
    for (const auto& seg : layout_.segments()) {
        const Grid& g = seg.samples.grid();
        const double order = seg.tag.branch == Branch::Differential ? problem_.alpha : problem_.beta;
        integrators_.emplace_back(g.spacing(), g.panels(), order);
    }
}

PiecewiseFunction PicardOperator::zeros() const { return layout_; }

PiecewiseFunction PicardOperator::initial_iterate() const {
    PiecewiseFunction x = layout_;
    for (auto& seg : x.mutable_segments()) {
        if (seg.tag.branch == Branch::Differential) {
            auto& v = seg.samples.mutable_values();
            std::fill(v.begin(), v.end(), problem_.x0);
        }
    }
    return x;
}

PiecewiseFunction PicardOperator::apply(const PiecewiseFunction& x) const {
    if (!layout_.same_layout(x)) {
        throw StructureError("PicardOperator::apply: iterate does not match the operator grid");
    }
    PiecewiseFunction out = layout_;
    const auto spans = segment_spans(problem_.partition);
    double carried = 0.0;  // impulse branch value at sigma_i
    std::vector<double> integrand;
    for (std::size_t s = 0; s < spans.size(); ++s) {
        const auto& span = spans[s];
        const auto& in = x.segments()[s].samples;
        const Grid& grid = in.grid();
        const auto& xv = in.values();
        const std::size_t n = grid.size();
        integrand.assign(n, 0.0);
        auto& dst = out.mutable_segments()[s].samples.mutable_values();

        if (span.tag.branch == Branch::Impulse) {
            const auto& hi = problem_.impulse_maps[span.tag.index - 1];
            for (std::size_t k = 0; k < n; ++k) {
                const double t = k == 0 ? left_sample_point(span) : grid[k];
                integrand[k] = hi(t, xv[k]);
                if (!std::isfinite(integrand[k])) non_finite(span.tag, t, "h_i");
            }
            integrators_[s].apply(integrand, dst);
            carried = dst.back();
        } else {
            double base = problem_.x0;
            if (span.tag.index > 0) {
                const bool impulse_present = problem_.partition.impulse_length(span.tag.index) > 0.0;
                base = impulse_present ? carried : 0.0;
            }
            const double dt = grid.spacing();
            double volterra = 0.0;
            double h_prev = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double t = k == 0 ? left_sample_point(span) : grid[k];
                const double hk = problem_.h(t, xv[k]);
                if (!std::isfinite(hk)) non_finite(span.tag, t, "h");
                if (k > 0) volterra += 0.5 * dt * (h_prev + hk);
                h_prev = hk;
                integrand[k] = problem_.f(t, xv[k], volterra);
                if (!std::isfinite(integrand[k])) non_finite(span.tag, t, "f");
            }
            integrators_[s].apply(integrand, dst);
            for (double& v : dst) v += base;
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (!std::isfinite(dst[k])) non_finite(span.tag, grid[k], "Tx");
        }
    }
    return out;
}

PiecewiseFunction apply_picard_operator(const ImpulsiveProblem& problem, const PiecewiseFunction& x) {
    return PicardOperator(problem, x).apply(x);
}

double geometric_ratio(const std::vector<double>& steps, std::size_t burn_in) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = burn_in; k < steps.size(); ++k) {
        if (steps[k] == 0.0) {
            return 0.0;
        }
        xs.push_back(static_cast<double>(k));
        ys.push_back(std::log(steps[k]));
    }
    if (xs.size() < 2) {
        // A single step followed by an exact zero is handled above.
        return std::numeric_limits<double>::quiet_NaN();
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return std::exp(sxy / sxx);
}

SolveResult solve_picard(const ImpulsiveProblem& problem, const SolverConfig& config,
                         const std::optional<PiecewiseFunction>& initial) {
    if (!(config.tolerance > 0.0)) {
        throw DomainError("solver tolerance must be positive");
    }
    if (config.max_iterations < 1) {
        throw DomainError("max_iterations must be at least 1");
    }
    if (!(config.theta.theta > 0.0)) {
        throw DomainError("theta must be positive");
    }
    const double sup_tol = config.sup_tolerance > 0.0 ? config.sup_tolerance : config.tolerance;
    const PicardOperator op = initial ? PicardOperator(problem, *initial)
                                      : PicardOperator(problem, config.grid_density);
    PiecewiseFunction x = initial ? *initial : op.initial_iterate();
    SolveTrace trace;
    for (std::size_t k = 0; k < config.max_iterations; ++k) {
        PiecewiseFunction next = op.apply(x);
        const PiecewiseFunction diff = next.zip(x, [](double a, double b) { return a - b; });
        const double step = bielecki_norm(diff, config.theta);
        const double sup_step = sup_norm(diff);
        trace.steps.push_back(step);
        trace.sup_steps.push_back(sup_step);
        x = std::move(next);
        trace.iterations = k + 1;
        if (step <= config.tolerance && sup_step <= sup_tol) {
            trace.converged = true;
            break;
        }
    }
    const std::size_t burn = trace.steps.size() > config.burn_in + 1 ? config.burn_in : 0;
    trace.observed_ratio = geometric_ratio(trace.steps, burn);
    return {std::move(x), std::move(trace)};
}

double fixed_point_residual(const ImpulsiveProblem& problem, const PiecewiseFunction& x,
                            BieleckiWeight theta) {
    const PiecewiseFunction tx = apply_picard_operator(problem, x);
    return bielecki_norm(tx.zip(x, [](double a, double b) { return a - b; }), theta);
}

}  // namespace fracimp
