#pragma once

// Discrete Riemann-Liouville integrals and Caputo derivatives over sampled
// functions, plus the piecewise (PC) function space and its Bielecki norm.
//
// Sampled data is treated as its piecewise-linear interpolant. Integrals use
// product-trapezoid quadrature: on every panel the interpolant is integrated
// against the exact kernel moments, so the weakly singular kernel needs no
// special treatment. Caputo derivatives use the L1 scheme.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracimp/partition.hpp"

namespace fracimp {

class Grid {
public:
    /// Nodes must be strictly increasing, finite, and at least two.
    explicit Grid(std::vector<double> nodes);

    static Grid uniform(double a, double b, std::size_t panels);

    double a() const noexcept { return nodes_.front(); }
    double b() const noexcept { return nodes_.back(); }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t panels() const noexcept { return nodes_.size() - 1; }
    double operator[](std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }

    /// True when built by Grid::uniform; enables lag-indexed weight caches.
    bool is_uniform() const noexcept { return uniform_; }
    double spacing() const noexcept { return (b() - a()) / static_cast<double>(panels()); }

    /// Index j of the panel [t_j, t_{j+1}] containing t (clamped to the grid).
    std::size_t panel_of(double t) const;

    bool operator==(const Grid& o) const { return nodes_ == o.nodes_; }

private:
    std::vector<double> nodes_;
    bool uniform_ = false;
};

class SampledFunction {
public:
    /// One finite value per grid node.
    SampledFunction(Grid grid, std::vector<double> values);

    static SampledFunction sample(Grid grid, const std::function<double(double)>& fn);

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& mutable_values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Linear interpolation; t must lie in [grid.a, grid.b].
    double operator()(double t) const;

    /// Restriction to [a, b] with interpolated endpoints inserted as nodes.
    SampledFunction restrict_to(double a, double b) const;

private:
    Grid grid_;
    std::vector<double> values_;
};

struct BieleckiWeight {
    double theta = 1.0;
};

/// (1/Gamma(beta)) int_a^tau (tau-s)^{beta-1} g(s) ds, beta in (0, 1].
/// Requires grid.a <= a <= tau <= grid.b.
double rl_integral(const SampledFunction& g, double beta, double a, double tau);

/// I^beta_{grid.a, t_k} g at every node t_k.
std::vector<double> rl_integral_nodes(const SampledFunction& g, double beta);

/// Same integral with a callable integrand, evaluated by tanh-sinh
/// quadrature; the integrand may carry integrable endpoint singularities.
double rl_integral_continuous(const std::function<double(double)>& g, double beta, double a,
                              double tau);

/// L1 approximation of (1/Gamma(1-alpha)) int_a^tau (tau-s)^{-alpha} g'(s) ds,
/// alpha in (0, 1). Needs at least three grid nodes in [a, tau].
double caputo_derivative(const SampledFunction& g, double alpha, double a, double tau);

/// Caputo derivative with lower terminal grid.a at every node (0 at t_0).
std::vector<double> caputo_derivative_nodes(const SampledFunction& g, double alpha);

/// max_k |I^alpha[D^alpha g](t_k) - (g(t_k) - g(a))| over nodes in [a, grid.b];
/// a discrete check that the integral inverts the Caputo derivative.
double caputo_round_trip_deviation(const SampledFunction& g, double alpha, double a);

/// Exact product-trapezoid weights of the panel whose near end lies at
/// distance `near` from the evaluation point and whose width is `width`.
/// `far` multiplies the value at the far node, `near_node` the near one.
/// The 1/Gamma(beta) factor is not included.
struct PanelWeights {
    double far = 0.0;
    double near_node = 0.0;
};
PanelWeights product_trapezoid_panel(double near, double width, double beta);

/// int over a panel of (t-s)^{-alpha} ds, without 1/Gamma(1-alpha).
double l1_panel_kernel(double near, double width, double alpha);

/// Lag-indexed product-trapezoid weights for a uniform grid, reused across
/// repeated applications of the same fractional integral.
class UniformIntegrator {
public:
    UniformIntegrator(double spacing, std::size_t panels, double beta);

    /// out[k] = I^beta_{t_0, t_k} of the samples, k = 0..panels.
    void apply(std::span<const double> values, std::span<double> out) const;

    std::size_t panels() const noexcept { return far_.size(); }

private:
    std::vector<double> far_;
    std::vector<double> near_;
    double scale_ = 1.0;
};

// ---------------------------------------------------------------------------
// Piecewise functions on a partition.

struct Segment {
    BranchTag tag;
    SampledFunction samples;
};

/// Default grid density in nodes per unit length.
inline constexpr double kDefaultGridDensity = 512.0;

/// Panel count for an interval: ceil(density * length), at least 2, even.
std::size_t panels_for(double length, double density);

/// Point at which node 0 of the span is evaluated: 0 for the interval
/// starting at the origin, otherwise the right limit just above span.a.
double left_sample_point(const SegmentSpan& span);

/// Function in PC(J, R) sampled segment by segment. Node 0 of each segment
/// stores the right limit at the left breakpoint; the last node stores the
/// value at the right breakpoint, which is also the left limit seen by the
/// following segment.
class PiecewiseFunction {
public:
    PiecewiseFunction(Partition partition, std::vector<Segment> segments);

    /// Zero function on the grid implied by the partition and density.
    static PiecewiseFunction zeros(const Partition& partition, double density = kDefaultGridDensity);

    /// Samples fn(tau) with node 0 of later segments taken as a right limit.
    static PiecewiseFunction sample(const Partition& partition, double density,
                                    const std::function<double(double)>& fn);

    /// Samples fn(tag, tau), letting the caller pick a formula per branch.
    static PiecewiseFunction sample(const Partition& partition, double density,
                                    const std::function<double(const BranchTag&, double)>& fn);

    const Partition& partition() const noexcept { return partition_; }
    const std::vector<Segment>& segments() const noexcept { return segments_; }
    std::vector<Segment>& mutable_segments() noexcept { return segments_; }

    std::size_t node_count() const noexcept;

    /// Value at tau in [0, T]; a breakpoint returns its left limit.
    double operator()(double tau) const;

    bool same_layout(const PiecewiseFunction& other) const;

    /// Pointwise combination on a shared layout.
    PiecewiseFunction zip(const PiecewiseFunction& other,
                          const std::function<double(double, double)>& op) const;

    /// Pointwise map fn(tau, value) (tau is the node coordinate).
    PiecewiseFunction map(const std::function<double(double, double)>& fn) const;

private:
    Partition partition_;
    std::vector<Segment> segments_;
};

/// Discrete Bielecki norm: max over all stored nodes of |x(t)| e^{-theta t}.
double bielecki_norm(const PiecewiseFunction& x, BieleckiWeight w);

/// Unweighted max over all stored nodes.
double sup_norm(const PiecewiseFunction& x);

}  // namespace fracimp
