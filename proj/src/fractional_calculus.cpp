#include "fracimp/fractional_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracimp/errors.hpp"
#include "fracimp/special_functions.hpp"

namespace fracimp {

namespace {

void check_order(double order, const char* what, bool allow_one) {
    const bool ok = order > 0.0 && (allow_one ? order <= 1.0 : order < 1.0);
    if (!ok) {
        throw DomainError(std::string(what) + ": order " + std::to_string(order) +
                          (allow_one ? " outside (0, 1]" : " outside (0, 1)"));
    }
}

void check_range(const Grid& grid, double a, double tau, const char* what) {
    const double slack = 1e-12 * std::max(1.0, std::abs(grid.b()));
    if (!(a >= grid.a() - slack) || !(tau <= grid.b() + slack) || !(a <= tau)) {
        throw DomainError(std::string(what) + ": need grid.a <= a <= tau <= grid.b, got a = " +
                          std::to_string(a) + ", tau = " + std::to_string(tau));
    }
}

// Interpolated value on panel j at s.
double panel_value(const SampledFunction& g, std::size_t j, double s) {
    const auto& t = g.grid().nodes();
    const auto& v = g.values();
    const double w = (s - t[j]) / (t[j + 1] - t[j]);
    return v[j] + (v[j + 1] - v[j]) * w;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid / SampledFunction

Grid::Grid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) {
        throw DomainError("Grid needs at least two nodes");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i])) {
            throw DomainError("Grid nodes must be finite");
        }
        if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
            throw DomainError("Grid nodes must be strictly increasing");
        }
    }
    const double h = spacing();
    uniform_ = true;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (std::abs((nodes_[i] - nodes_[i - 1]) - h) > 1e-9 * h) {
            uniform_ = false;
            break;
        }
    }
}

Grid Grid::uniform(double a, double b, std::size_t panels) {
    if (panels == 0 || !(b > a)) {
        throw DomainError("Grid::uniform needs b > a and at least one panel");
    }
    std::vector<double> nodes(panels + 1);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t k = 0; k < panels; ++k) {
        nodes[k] = a + h * static_cast<double>(k);
    }
    nodes[panels] = b;
    return Grid(std::move(nodes));
}

std::size_t Grid::panel_of(double t) const {
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    std::size_t j = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::min(j, panels() - 1);
}

SampledFunction::SampledFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw StructureError("SampledFunction: " + std::to_string(values_.size()) + " values for " +
                             std::to_string(grid_.size()) + " nodes");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw EvaluationError("SampledFunction: non-finite sample");
        }
    }
}

SampledFunction SampledFunction::sample(Grid grid, const std::function<double(double)>& fn) {
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        values[k] = fn(grid[k]);
    }
    return SampledFunction(std::move(grid), std::move(values));
}

double SampledFunction::operator()(double t) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(grid_.b()));
    if (t < grid_.a() - slack || t > grid_.b() + slack) {
        throw DomainError("SampledFunction: t = " + std::to_string(t) + " outside the grid");
    }
    return panel_value(*this, grid_.panel_of(t), std::clamp(t, grid_.a(), grid_.b()));
}

SampledFunction SampledFunction::restrict_to(double a, double b) const {
    check_range(grid_, a, b, "restrict_to");
    if (!(b > a)) {
        throw DomainError("restrict_to: empty interval");
    }
    std::vector<double> nodes{a};
    std::vector<double> values{(*this)(a)};
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        if (grid_[k] > a && grid_[k] < b) {
            nodes.push_back(grid_[k]);
            values.push_back(values_[k]);
        }
    }
    nodes.push_back(b);
    values.push_back((*this)(b));
    return SampledFunction(Grid(std::move(nodes)), std::move(values));
}

// ---------------------------------------------------------------------------
// Panel weights

PanelWeights product_trapezoid_panel(double near, double width, double beta) {
    if (!(width > 0.0)) {
        return {};
    }
    if (near <= 0.0) {
        const double hb = std::pow(width, beta);
        return {hb / (beta + 1.0), hb / (beta * (beta + 1.0))};
    }
    const double r = width / near;
    if (r < 0.5) {
        // (1 + r s)^{beta-1} expanded in r; geometric convergence.
        double coeff = 1.0;
        double rn = 1.0;
        double far_sum = 0.0;
        double near_sum = 0.0;
        for (int n = 0; n < 200; ++n) {
            const double t = coeff * rn;
            far_sum += t / (n + 2.0);
            near_sum += t / ((n + 1.0) * (n + 2.0));
            if (std::abs(t) < 1e-18 * far_sum) {
                break;
            }
            coeff *= (beta - 1.0 - n) / (n + 1.0);
            rn *= r;
        }
        const double pref = width * std::pow(near, beta - 1.0);
        return {pref * far_sum, pref * near_sum};
    }
    const double d0 = near + width;
    const double m0 = (std::pow(d0, beta) - std::pow(near, beta)) / beta;
    const double m1 = (std::pow(d0, beta + 1.0) - std::pow(near, beta + 1.0)) / (beta + 1.0);
    return {(m1 - near * m0) / width, (d0 * m0 - m1) / width};
}

double l1_panel_kernel(double near, double width, double alpha) {
    const double e = 1.0 - alpha;
    if (!(width > 0.0)) {
        return 0.0;
    }
    if (near <= 0.0) {
        return std::pow(width, e) / e;
    }
    return std::pow(near, e) * std::expm1(e * std::log1p(width / near)) / e;
}

UniformIntegrator::UniformIntegrator(double spacing, std::size_t panels, double beta)
    : far_(panels), near_(panels), scale_(1.0 / gamma_fn(beta)) {
    check_order(beta, "UniformIntegrator", true);
    for (std::size_t lag = 0; lag < panels; ++lag) {
        const auto w = product_trapezoid_panel(spacing * static_cast<double>(lag), spacing, beta);
        far_[lag] = w.far;
        near_[lag] = w.near_node;
    }
}

void UniformIntegrator::apply(std::span<const double> values, std::span<double> out) const {
    const std::size_t n = far_.size();
    if (values.size() != n + 1 || out.size() != n + 1) {
        throw StructureError("UniformIntegrator: sample count does not match the grid");
    }
    out[0] = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            const std::size_t lag = k - p - 1;
            s += far_[lag] * values[p] + near_[lag] * values[p + 1];
        }
        out[k] = s * scale_;
    }
}

// ---------------------------------------------------------------------------
// Integrals and derivatives

double rl_integral(const SampledFunction& g, double beta, double a, double tau) {
    check_order(beta, "rl_integral", true);
    const Grid& grid = g.grid();
    check_range(grid, a, tau, "rl_integral");
    a = std::max(a, grid.a());
    tau = std::min(tau, grid.b());
    if (tau <= a) {
        return 0.0;
    }
    const std::size_t j0 = grid.panel_of(a);
    const std::size_t j1 = grid.panel_of(tau);
    double sum = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) {
        const double s0 = std::max(a, grid[j]);
        const double s1 = std::min(tau, grid[j + 1]);
        if (!(s1 > s0)) {
            continue;
        }
        const auto w = product_trapezoid_panel(tau - s1, s1 - s0, beta);
        sum += w.far * panel_value(g, j, s0) + w.near_node * panel_value(g, j, s1);
    }
    return sum / gamma_fn(beta);
}

std::vector<double> rl_integral_nodes(const SampledFunction& g, double beta) {
    check_order(beta, "rl_integral_nodes", true);
    const Grid& grid = g.grid();
    std::vector<double> out(grid.size(), 0.0);
    if (grid.is_uniform()) {
        UniformIntegrator(grid.spacing(), grid.panels(), beta).apply(g.values(), out);
        return out;
    }
    const auto& v = g.values();
    const double scale = 1.0 / gamma_fn(beta);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        double s = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            const auto w = product_trapezoid_panel(grid[k] - grid[p + 1], grid[p + 1] - grid[p], beta);
            s += w.far * v[p] + w.near_node * v[p + 1];
        }
        out[k] = s * scale;
    }
    return out;
}

double rl_integral_continuous(const std::function<double(double)>& g, double beta, double a,
                              double tau) {
    check_order(beta, "rl_integral_continuous", true);
    if (!(tau >= a)) {
        throw DomainError("rl_integral_continuous: tau < a");
    }
    if (tau == a) {
        return 0.0;
    }
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    auto integrand = [&](double s, double complement) {
        // complement > 0 is the exact distance tau - s near the upper end.
        const double d = complement > 0.0 ? complement : tau - s;
        if (!(d > 0.0)) {
            return 0.0;
        }
        const double gs = g(s);
        if (!std::isfinite(gs)) {
            throw EvaluationError("rl_integral_continuous: non-finite integrand at s = " +
                                  std::to_string(s));
        }
        return std::pow(d, beta - 1.0) * gs;
    };
    const double value = integrator.integrate(integrand, a, tau, 1e-13);
    return value / gamma_fn(beta);
}

double caputo_derivative(const SampledFunction& g, double alpha, double a, double tau) {
    check_order(alpha, "caputo_derivative", false);
    const Grid& grid = g.grid();
    check_range(grid, a, tau, "caputo_derivative");
    std::size_t inside = 0;
    for (double t : grid.nodes()) {
        if (t >= a && t <= tau) ++inside;
    }
    if (inside < 3) {
        throw ResolutionError("caputo_derivative: fewer than 3 grid nodes in [a, tau]");
    }
    const auto& t = grid.nodes();
    const auto& v = g.values();
    const std::size_t j0 = grid.panel_of(a);
    const std::size_t j1 = grid.panel_of(tau);
    double sum = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) {
        const double s0 = std::max(a, t[j]);
        const double s1 = std::min(tau, t[j + 1]);
        if (!(s1 > s0)) {
            continue;
        }
        const double slope = (v[j + 1] - v[j]) / (t[j + 1] - t[j]);
        sum += slope * l1_panel_kernel(tau - s1, s1 - s0, alpha);
    }
    return sum / gamma_fn(1.0 - alpha);
}

std::vector<double> caputo_derivative_nodes(const SampledFunction& g, double alpha) {
    check_order(alpha, "caputo_derivative_nodes", false);
    const Grid& grid = g.grid();
    const auto& t = grid.nodes();
    const auto& v = g.values();
    const std::size_t n = grid.panels();
    std::vector<double> slopes(n);
    for (std::size_t j = 0; j < n; ++j) {
        slopes[j] = (v[j + 1] - v[j]) / (t[j + 1] - t[j]);
    }
    const double scale = 1.0 / gamma_fn(1.0 - alpha);
    std::vector<double> out(grid.size(), 0.0);
    if (grid.is_uniform()) {
        const double h = grid.spacing();
        std::vector<double> kernel(n);
        for (std::size_t lag = 0; lag < n; ++lag) {
            kernel[lag] = l1_panel_kernel(h * static_cast<double>(lag), h, alpha);
        }
        for (std::size_t k = 1; k <= n; ++k) {
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) {
                s += slopes[p] * kernel[k - p - 1];
            }
            out[k] = s * scale;
        }
        return out;
    }
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            s += slopes[p] * l1_panel_kernel(t[k] - t[p + 1], t[p + 1] - t[p], alpha);
        }
        out[k] = s * scale;
    }
    return out;
}

double caputo_round_trip_deviation(const SampledFunction& g, double alpha, double a) {
    const SampledFunction local = (a == g.grid().a()) ? g : g.restrict_to(a, g.grid().b());
    const auto derivative = caputo_derivative_nodes(local, alpha);
    const auto recovered = rl_integral_nodes(SampledFunction(local.grid(), derivative), alpha);
    const auto& v = local.values();
    double worst = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        worst = std::max(worst, std::abs(recovered[k] - (v[k] - v[0])));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Piecewise functions

std::size_t panels_for(double length, double density) {
    if (!(density > 0.0)) {
        throw DomainError("grid density must be positive");
    }
    auto n = static_cast<std::size_t>(std::ceil(density * length - 1e-9));
    n = std::max<std::size_t>(n, 2);
    if (n % 2 == 1) {
        ++n;
    }
    return n;
}

double left_sample_point(const SegmentSpan& span) {
    return span.a == 0.0 ? 0.0 : std::nextafter(span.a, span.b);
}

PiecewiseFunction::PiecewiseFunction(Partition partition, std::vector<Segment> segments)
    : partition_(std::move(partition)), segments_(std::move(segments)) {
    const auto spans = segment_spans(partition_);
    if (spans.size() != segments_.size()) {
        throw StructureError("PiecewiseFunction: segment count does not match the partition");
    }
    for (std::size_t s = 0; s < spans.size(); ++s) {
        const Grid& grid = segments_[s].samples.grid();
        if (!(segments_[s].tag == spans[s].tag) || grid.a() != spans[s].a || grid.b() != spans[s].b) {
            throw StructureError("PiecewiseFunction: segment " + std::to_string(s) +
                                 " does not tile its partition interval");
        }
    }
}

PiecewiseFunction PiecewiseFunction::zeros(const Partition& partition, double density) {
    std::vector<Segment> segments;
    for (const auto& span : segment_spans(partition)) {
        Grid grid = Grid::uniform(span.a, span.b, panels_for(span.length(), density));
        std::vector<double> values(grid.size(), 0.0);
        segments.push_back({span.tag, SampledFunction(std::move(grid), std::move(values))});
    }
    return PiecewiseFunction(partition, std::move(segments));
}

PiecewiseFunction PiecewiseFunction::sample(const Partition& partition, double density,
                                            const std::function<double(double)>& fn) {
    return sample(partition, density,
                  std::function<double(const BranchTag&, double)>(
                      [&fn](const BranchTag&, double t) { return fn(t); }));
}

PiecewiseFunction PiecewiseFunction::sample(
    const Partition& partition, double density,
    const std::function<double(const BranchTag&, double)>& fn) {
    std::vector<Segment> segments;
    for (const auto& span : segment_spans(partition)) {
        Grid grid = Grid::uniform(span.a, span.b, panels_for(span.length(), density));
        std::vector<double> values(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            values[k] = fn(span.tag, k == 0 ? left_sample_point(span) : grid[k]);
        }
        segments.push_back({span.tag, SampledFunction(std::move(grid), std::move(values))});
    }
    return PiecewiseFunction(partition, std::move(segments));
}

std::size_t PiecewiseFunction::node_count() const noexcept {
    std::size_t n = 0;
    for (const auto& s : segments_) n += s.samples.size();
    return n;
}

double PiecewiseFunction::operator()(double tau) const {
    if (tau == 0.0) {
        return segments_.front().samples.values().front();
    }
    for (const auto& s : segments_) {
        const Grid& g = s.samples.grid();
        if (tau > g.a() && tau <= g.b()) {
            return s.samples(tau);
        }
    }
    throw DomainError("PiecewiseFunction: tau = " + std::to_string(tau) + " outside [0, T]");
}

bool PiecewiseFunction::same_layout(const PiecewiseFunction& other) const {
    if (segments_.size() != other.segments_.size()) return false;
    for (std::size_t s = 0; s < segments_.size(); ++s) {
        if (!(segments_[s].tag == other.segments_[s].tag) ||
            !(segments_[s].samples.grid() == other.segments_[s].samples.grid())) {
            return false;
        }
    }
    return true;
}

PiecewiseFunction PiecewiseFunction::zip(const PiecewiseFunction& other,
                                         const std::function<double(double, double)>& op) const {
    if (!same_layout(other)) {
        throw StructureError("PiecewiseFunction::zip: grid layouts differ");
    }
    PiecewiseFunction out = *this;
    for (std::size_t s = 0; s < segments_.size(); ++s) {
        auto& dst = out.segments_[s].samples.mutable_values();
        const auto& rhs = other.segments_[s].samples.values();
        for (std::size_t k = 0; k < dst.size(); ++k) {
            dst[k] = op(dst[k], rhs[k]);
        }
    }
    return out;
}

PiecewiseFunction PiecewiseFunction::map(const std::function<double(double, double)>& fn) const {
    PiecewiseFunction out = *this;
    for (auto& seg : out.segments_) {
        const auto& nodes = seg.samples.grid().nodes();
        auto& vals = seg.samples.mutable_values();
        for (std::size_t k = 0; k < vals.size(); ++k) {
            vals[k] = fn(nodes[k], vals[k]);
        }
    }
    return out;
}

double bielecki_norm(const PiecewiseFunction& x, BieleckiWeight w) {
    double best = 0.0;
    for (const auto& seg : x.segments()) {
        const auto& nodes = seg.samples.grid().nodes();
        const auto& vals = seg.samples.values();
        for (std::size_t k = 0; k < vals.size(); ++k) {
            best = std::max(best, std::abs(vals[k]) * std::exp(-w.theta * nodes[k]));
        }
    }
    return best;
}

double sup_norm(const PiecewiseFunction& x) {
    double best = 0.0;
    for (const auto& seg : x.segments()) {
        for (double v : seg.samples.values()) {
            best = std::max(best, std::abs(v));
        }
    }
    return best;
}

}  // namespace fracimp
