#include "fracimp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "fracimp/errors.hpp"
#include "fracimp/special_functions.hpp"

namespace fracimp {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

void check_orders(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
        throw DomainError("alpha and beta must lie in (0, 1)");
    }
}

double memory_term(double coeff, double alpha, double theta, double len, bool display) {
    if (coeff == 0.0 || len <= 0.0) {
        return 0.0;
    }
    if (display) {
        return coeff / gamma_fn(alpha + 1.0) * std::pow(len, alpha) /
               (std::sqrt(2.0 * alpha) * std::sqrt(2.0 * theta));
    }
    return coeff / gamma_fn(alpha + 1.0) * std::pow(len, alpha + 0.5) /
           (std::sqrt(2.0 * alpha + 1.0) * std::sqrt(2.0 * theta));
}

double impulse_constant(const HypothesisData& hyp, std::size_t i) {
    return i == 0 ? 0.0 : hyp.L_h.at(i - 1);
}

bool all_zero(const HypothesisData& hyp) {
    if (hyp.M_f != 0.0 || (hyp.N_f != 0.0 && hyp.K_h != 0.0)) {
        return false;
    }
    return std::all_of(hyp.L_h.begin(), hyp.L_h.end(), [](double l) { return l == 0.0; });
}

double max_total(const std::vector<IntervalTerms>& terms) {
    double best = 0.0;
    for (const auto& t : terms) best = std::max(best, t.total());
    return best;
}

}  // namespace

double holder_kernel_bound(double order, double theta, double length) {
    if (!(order > 0.5 && order <= 1.0)) {
        throw DomainError("holder_kernel_bound: order must lie in (1/2, 1], got " + fmt(order));
    }
    if (!(theta > 0.0)) {
        throw DomainError("holder_kernel_bound: theta must be positive");
    }
    if (!(length >= 0.0)) {
        throw DomainError("holder_kernel_bound: length must be nonnegative");
    }
    return std::pow(length, order - 0.5) / (std::sqrt(2.0 * order - 1.0) * std::sqrt(2.0 * theta));
}

const char* form_name(ConstantForm f) noexcept {
    switch (f) {
        case ConstantForm::Derivation: return "derivation";
        case ConstantForm::Display: return "display";
        case ConstantForm::ExampleArithmetic: return "example-arithmetic";
    }
    return "derivation";
}

HolderExponents HolderExponents::from(double p, double p1) {
    if (!(p > 1.0) || !(p1 > 1.0)) {
        throw DomainError("Hoelder exponents must exceed 1");
    }
    return {p, p / (p - 1.0), p1, p1 / (p1 - 1.0)};
}

AnalysisReport contraction_constant_basic(const Partition& partition, const HypothesisData& hyp, double alpha,
                                          double beta, double theta, ConstantForm form) {
    check_orders(alpha, beta);
    const auto pc = validate_partition(partition);
    if (!pc) throw DomainError("invalid partition: " + pc.violation);
    validate_hypothesis(hyp, alpha, beta, partition.m());
    if (!(theta > 0.0)) throw DomainError("theta must be positive");

    AnalysisReport rep;
    rep.variant = HypothesisVariant::Basic;
    rep.form = form;
    rep.theta_used = theta;
    for (std::size_t i = 0; i <= partition.m(); ++i) {
        IntervalTerms t;
        t.index = i;
        const double len = partition.differential_length(i);
        const double lh = impulse_constant(hyp, i);
        if (i > 0 && lh != 0.0) {
            t.impulse = lh / gamma_fn(beta) * holder_kernel_bound(beta, theta, partition.impulse_length(i));
        }
        if (hyp.M_f != 0.0 && len > 0.0) {
            t.drift = hyp.M_f / gamma_fn(alpha) * holder_kernel_bound(alpha, theta, len);
        }
        switch (form) {
            case ConstantForm::Derivation:
                t.memory = memory_term(hyp.N_f * hyp.K_h, alpha, theta, len, false);
                break;
            case ConstantForm::Display:
                t.memory = memory_term(hyp.N_f * hyp.K_h, alpha, theta, len, true);
                break;
            case ConstantForm::ExampleArithmetic:
                t.memory = memory_term(hyp.N_f * (i == 0 ? hyp.K_h : lh), alpha, theta, len, false);
                break;
        }
        rep.per_interval.push_back(t);
    }
    rep.L = max_total(rep.per_interval);
    rep.theta_threshold = theta_threshold_basic(partition, hyp, alpha, beta, form);
    return rep;
}

double theta_threshold_basic(const Partition& partition, const HypothesisData& hyp, double alpha, double beta,
                             ConstantForm form) {
    check_orders(alpha, beta);
    // Every term carries (2 theta)^{-1/2}; at theta = 1/2 that factor is 1.
    double a = 0.0;
    for (std::size_t i = 0; i <= partition.m(); ++i) {
        const double len = partition.differential_length(i);
        const double lh = impulse_constant(hyp, i);
        double s = 0.0;
        if (i > 0 && lh != 0.0) s += lh / gamma_fn(beta) * holder_kernel_bound(beta, 0.5, partition.impulse_length(i));
        if (hyp.M_f != 0.0 && len > 0.0) s += hyp.M_f / gamma_fn(alpha) * holder_kernel_bound(alpha, 0.5, len);
        const double coeff = form == ConstantForm::ExampleArithmetic ? hyp.N_f * (i == 0 ? hyp.K_h : lh)
                                                                     : hyp.N_f * hyp.K_h;
        s += memory_term(coeff, alpha, 0.5, len, form == ConstantForm::Display);
        a = std::max(a, s);
    }
    return 0.5 * a * a;
}

double exponent_upper_bound(double order, double gamma) {
    double ub = 1.0 / (1.0 - order);
    if (gamma + order - 1.0 < 0.0) {
        ub = std::min(ub, 1.0 / (1.0 - order - gamma));
    }
    return ub;
}

void check_exponents(const HypothesisData& hyp, double alpha, double beta, const HolderExponents& e) {
    if (!(e.p > 1.0)) throw DomainError("p > 1 fails");
    if (std::abs(1.0 / e.p + 1.0 / e.p_conj - 1.0) > 1e-12) throw DomainError("1/p + 1/p* = 1 fails");
    if (!(e.p * (alpha - 1.0) + 1.0 > 0.0)) throw DomainError("p(alpha-1)+1 > 0 fails");
    if (!(e.p * hyp.gamma_f > e.p * (1.0 - alpha) - 1.0)) throw DomainError("p*gamma_f > p(1-alpha)-1 fails");
    if (hyp.L_h.empty()) return;
    if (!(e.p1 > 1.0)) throw DomainError("p1 > 1 fails");
    if (std::abs(1.0 / e.p1 + 1.0 / e.p1_conj - 1.0) > 1e-12) throw DomainError("1/p1 + 1/p1* = 1 fails");
    if (!(e.p1 * (beta - 1.0) + 1.0 > 0.0)) throw DomainError("p1(beta-1)+1 > 0 fails");
    if (!(e.p1 * hyp.gamma_imp > e.p1 * (1.0 - beta) - 1.0)) throw DomainError("p1*gamma > p1(1-beta)-1 fails");
}

WeightedBounds weighted_bounds(double T, const HypothesisData& hyp, double alpha, double beta,
                               const HolderExponents& e) {
    check_exponents(hyp, alpha, beta, e);
    WeightedBounds b;
    b.omega1 = std::pow(weighted_power_integral({1.0, e.p, alpha, hyp.gamma_f + 1.0, T}), 1.0 / e.p);
    if (!hyp.L_h.empty()) {
        b.omega2 = std::pow(weighted_power_integral({1.0, e.p1, beta, hyp.gamma_imp + 1.0, T}), 1.0 / e.p1);
    }
    return b;
}

AnalysisReport contraction_constant_weighted(const Partition& partition, const HypothesisData& hyp, double alpha,
                                             double beta, double theta, const HolderExponents& e) {
    check_orders(alpha, beta);
    const auto pc = validate_partition(partition);
    if (!pc) throw DomainError("invalid partition: " + pc.violation);
    validate_hypothesis(hyp, alpha, beta, partition.m());
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    const WeightedBounds b = weighted_bounds(partition.T(), hyp, alpha, beta, e);

    AnalysisReport rep;
    rep.variant = HypothesisVariant::Weighted;
    rep.form = ConstantForm::Derivation;
    rep.theta_used = theta;
    rep.exponents = e;
    rep.bounds = b;
    const double drift = b.omega1 * hyp.M_f / (gamma_fn(alpha) * std::pow(theta * e.p_conj, 1.0 / e.p_conj));
    for (std::size_t i = 0; i <= partition.m(); ++i) {
        IntervalTerms t;
        t.index = i;
        const double lh = impulse_constant(hyp, i);
        if (i > 0) {
            t.impulse = lh * b.omega2 / (gamma_fn(beta) * std::pow(theta * e.p1_conj, 1.0 / e.p1_conj));
        }
        t.drift = drift;
        t.memory = memory_term(hyp.N_f * hyp.K_h, alpha, theta, partition.differential_length(i), false);
        rep.per_interval.push_back(t);
    }
    rep.L = max_total(rep.per_interval);
    return rep;
}

double theta_threshold_weighted(const Partition& partition, const HypothesisData& hyp, double alpha, double beta,
                                const HolderExponents& e) {
    if (all_zero(hyp)) {
        return 0.0;
    }
    const double target = 1.0 - 1e-9;
    auto l1 = [&](double th) { return contraction_constant_weighted(partition, hyp, alpha, beta, th, e).L; };
    double lo = 1e-6;
    double hi = 1e12;
    if (l1(lo) < target) {
        return lo;
    }
    if (l1(hi) >= target) {
        throw NoThresholdError("weighted constant stays >= 1 at theta = 1e12 (L1 = " + fmt(l1(hi)) + ")");
    }
    for (int k = 0; k < 200 && hi / lo > 1.0 + 1e-14; ++k) {
        const double mid = std::sqrt(lo * hi);
        (l1(mid) < target ? hi : lo) = mid;
    }
    return hi;
}

HolderExponents select_holder_exponents(const Partition& partition, const HypothesisData& hyp, double alpha,
                                        double beta) {
    auto range = [](double ub) {
        const double lo = 1.01;
        double hi = std::min(10.0, 1.0 + 0.9 * (ub - 1.0));
        if (hi < lo) return std::pair{0.5 * (1.0 + ub), 0.5 * (1.0 + ub)};
        return std::pair{lo, hi};
    };
    const auto [plo, phi] = range(exponent_upper_bound(alpha, hyp.gamma_f));
    const auto [qlo, qhi] = partition.m() > 0 ? range(exponent_upper_bound(beta, hyp.gamma_imp))
                                              : std::pair{2.0, 2.0};
    const int n = 40;
    HolderExponents best = HolderExponents::from(plo, qlo);
    double best_theta = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= n; ++a) {
        const double p = plo + (phi - plo) * a / n;
        for (int c = 0; c <= (partition.m() > 0 ? n : 0); ++c) {
            const double p1 = qlo + (qhi - qlo) * c / n;
            const auto e = HolderExponents::from(p, p1);
            double th;
            try {
                th = theta_threshold_weighted(partition, hyp, alpha, beta, e);
            } catch (const NoThresholdError&) {
                continue;
            }
            if (th < best_theta) {
                best_theta = th;
                best = e;
            }
        }
    }
    return best;
}

AnalysisReport analyze(const Partition& partition, const HypothesisData& hyp, double alpha, double beta,
                       double theta, ConstantForm form, std::optional<HolderExponents> exponents) {
    if (hyp.variant == HypothesisVariant::Basic) {
        const double th = theta > 0.0 ? theta : recommended_theta(partition, hyp, alpha, beta, form);
        return contraction_constant_basic(partition, hyp, alpha, beta, th, form);
    }
    const HolderExponents e = exponents ? *exponents : select_holder_exponents(partition, hyp, alpha, beta);
    const double threshold = theta_threshold_weighted(partition, hyp, alpha, beta, e);
    const double th = theta > 0.0 ? theta : (threshold > 0.0 ? 1.05 * threshold : 1.0);
    AnalysisReport rep = contraction_constant_weighted(partition, hyp, alpha, beta, th, e);
    rep.theta_threshold = threshold;
    return rep;
}

double recommended_theta(const Partition& partition, const HypothesisData& hyp, double alpha, double beta,
                         ConstantForm form) {
    double threshold;
    if (hyp.variant == HypothesisVariant::Basic) {
        threshold = theta_threshold_basic(partition, hyp, alpha, beta, form);
    } else {
        const auto e = select_holder_exponents(partition, hyp, alpha, beta);
        threshold = theta_threshold_weighted(partition, hyp, alpha, beta, e);
    }
    return threshold > 0.0 ? 1.05 * threshold : 1.0;
}

// ---------------------------------------------------------------------------

PhiDomination check_phi_domination(const SampledFunction& phi, double alpha) {
    const Grid& g = phi.grid();
    if (g.a() != 0.0) {
        throw DomainError("check_phi_domination: phi must be sampled from tau = 0");
    }
    const auto& v = phi.values();
    PhiDomination out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] < 0.0) {
            return {false, 0.0, g[k], "phi is negative at tau = " + fmt(g[k])};
        }
        if (k > 0 && v[k] < v[k - 1] - 1e-14 * std::abs(v[k - 1])) {
            return {false, 0.0, g[k], "phi decreases at tau = " + fmt(g[k])};
        }
    }
    const auto integral = rl_integral_nodes(phi, alpha);
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] == 0.0) {
            if (integral[k] > 0.0) {
                return {false, 0.0, g[k], "phi = 0 but I^alpha phi > 0 at tau = " + fmt(g[k])};
            }
            continue;
        }
        const double r = integral[k] / v[k];
        if (r > out.c_phi) {
            out.c_phi = r;
            out.argmax_tau = g[k];
        }
    }
    return out;
}

double phi_domination_excess(const SampledFunction& phi, double alpha, double c) {
    const auto integral = rl_integral_nodes(phi, alpha);
    const auto& v = phi.values();
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < v.size(); ++k) {
        worst = std::max(worst, integral[k] - c * v[k]);
    }
    return worst;
}

// ---------------------------------------------------------------------------

namespace {

// |D^alpha y - f(t, y, int h)| at nodes k >= 1 of a differential segment.
std::vector<double> differential_residuals(const ImpulsiveProblem& problem, const SegmentSpan& span,
                                           const SampledFunction& y) {
    const Grid& grid = y.grid();
    const auto& v = y.values();
    const auto d = caputo_derivative_nodes(y, problem.alpha);
    std::vector<double> r(grid.size(), 0.0);
    double volterra = 0.0;
    double h_prev = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = k == 0 ? left_sample_point(span) : grid[k];
        const double hk = problem.h(t, v[k]);
        if (k > 0) volterra += 0.5 * (grid[k] - grid[k - 1]) * (h_prev + hk);
        h_prev = hk;
        if (k > 0) r[k] = std::abs(d[k] - problem.f(t, v[k], volterra));
    }
    return r;
}

std::vector<double> impulse_residuals_sampled(const ImpulsiveProblem& problem, const SegmentSpan& span,
                                              const SampledFunction& y) {
    const Grid& grid = y.grid();
    const auto& v = y.values();
    const auto& hi = problem.impulse_maps[span.tag.index - 1];
    std::vector<double> g(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        g[k] = hi(k == 0 ? left_sample_point(span) : grid[k], v[k]);
    }
    const auto integral = rl_integral_nodes(SampledFunction(grid, g), problem.beta);
    std::vector<double> r(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) r[k] = std::abs(v[k] - integral[k]);
    return r;
}

SampledFunction every_other(const SampledFunction& y) {
    std::vector<double> nodes;
    std::vector<double> vals;
    for (std::size_t k = 0; k < y.size(); k += 2) {
        nodes.push_back(y.grid()[k]);
        vals.push_back(y.values()[k]);
    }
    return SampledFunction(Grid(std::move(nodes)), std::move(vals));
}

double band(const std::vector<double>& fine, const std::vector<double>& coarse, std::size_t first) {
    double b = 0.0;
    for (std::size_t c = first; c < coarse.size(); ++c) {
        b = std::max(b, std::abs(fine[2 * c] - coarse[c]));
    }
    return b;
}

}  // namespace

ResidualProfile residual_profile(const ImpulsiveProblem& problem, const PiecewiseFunction& y,
                                 const ResidualOptions& options) {
    validate_problem(problem);
    if (!(y.partition() == problem.partition)) {
        throw StructureError("residual_profile: y is sampled on a different partition");
    }
    const Partition& p = problem.partition;
    ResidualProfile out;
    out.differential_sups.assign(p.m() + 1, 0.0);
    out.differential_bands.assign(p.m() + 1, 0.0);
    out.differential_argmax.assign(p.m() + 1, 0.0);
    out.impulse_sups.assign(p.m(), 0.0);
    out.impulse_bands.assign(p.m(), 0.0);

    double eps = 0.0;
    bool eps_ok = true;
    const auto spans = segment_spans(p);
    for (std::size_t s = 0; s < spans.size(); ++s) {
        const auto& span = spans[s];
        const auto& ys = y.segments()[s].samples;
        const Grid& grid = ys.grid();
        if (span.tag.branch == Branch::Differential) {
            if (grid.size() < 3) {
                throw ResolutionError("residual_profile: differential segment needs at least 3 nodes");
            }
            const auto r = differential_residuals(problem, span, ys);
            const std::size_t i = span.tag.index;
            for (std::size_t k = 1; k < r.size(); ++k) {
                if (r[k] > out.differential_sups[i]) {
                    out.differential_sups[i] = r[k];
                    out.differential_argmax[i] = grid[k];
                }
                const double ph = options.phi ? options.phi(grid[k]) : 1.0;
                if (ph == 0.0) {
                    if (r[k] > 0.0 && eps_ok) {
                        eps_ok = false;
                        out.status = "phi vanishes where the residual is positive (tau = " + fmt(grid[k]) + ")";
                    }
                    continue;
                }
                eps = std::max(eps, r[k] / ph);
            }
            if (options.richardson && grid.panels() % 2 == 0 && grid.panels() >= 4) {
                const auto rc = differential_residuals(problem, span, every_other(ys));
                out.differential_bands[i] = band(r, rc, 1);
            }
        } else {
            const std::size_t i = span.tag.index;
            std::vector<double> r;
            if (options.candidate) {
                const auto& hi = problem.impulse_maps[i - 1];
                r.assign(grid.size(), 0.0);
                r[0] = std::abs(ys.values()[0]);
                for (std::size_t k = 1; k < grid.size(); ++k) {
                    const double integral = rl_integral_continuous(
                        [&](double s) { return hi(s, options.candidate(s)); }, problem.beta, span.a, grid[k]);
                    r[k] = std::abs(ys.values()[k] - integral);
                }
            } else {
                r = impulse_residuals_sampled(problem, span, ys);
                if (options.richardson && grid.panels() % 2 == 0 && grid.panels() >= 4) {
                    const auto rc = impulse_residuals_sampled(problem, span, every_other(ys));
                    out.impulse_bands[i - 1] = band(r, rc, 0);
                }
            }
            out.impulse_sups[i - 1] = *std::max_element(r.begin(), r.end());
        }
    }
    for (std::size_t i = 0; i < p.m(); ++i) {
        const double sup = out.impulse_sups[i];
        if (options.psi > 0.0) {
            eps = std::max(eps, sup / options.psi);
        } else if (sup > options.impulse_exact_tol && eps_ok) {
            eps_ok = false;
            out.status = "impulse-exact required";
        }
    }
    if (eps_ok) out.epsilon_for_phi = eps;
    return out;
}

// ---------------------------------------------------------------------------

StabilityConstant stability_constant(const Partition& partition, const HypothesisData& hyp, double alpha,
                                     double beta, double theta, const std::optional<HolderExponents>& exponents,
                                     double c_phi, double psi) {
    if (!(c_phi > 0.0)) throw DomainError("c_phi must be positive");
    if (!(psi >= 0.0)) throw DomainError("psi must be nonnegative");
    AnalysisReport terms;
    if (hyp.variant == HypothesisVariant::Weighted) {
        const auto e = exponents ? *exponents : select_holder_exponents(partition, hyp, alpha, beta);
        terms = contraction_constant_weighted(partition, hyp, alpha, beta, theta, e);
    } else {
        terms = contraction_constant_basic(partition, hyp, alpha, beta, theta, ConstantForm::Derivation);
    }
    StabilityConstant out;
    std::vector<std::string> failures;
    auto denominator = [&](double term, const std::string& label) {
        const double d = 1.0 - term;
        out.denominators.push_back(d);
        out.denominator_labels.push_back(label);
        if (!(d > 0.0)) failures.push_back(label);
        return d;
    };
    const auto& t0 = terms.per_interval[0];
    const double d0 = denominator(t0.drift + t0.memory, "differential interval (0, tau_1]");
    out.first = c_phi / d0;
    for (std::size_t i = 1; i <= partition.m(); ++i) {
        const auto& ti = terms.per_interval[i];
        const std::string is = std::to_string(i);
        const double di = denominator(ti.impulse, "impulse interval (tau_" + is + ", sigma_" + is + "]");
        const double dm = denominator(ti.total(), "differential interval (sigma_" + is + ", tau_" +
                                                      std::to_string(i + 1) + "]");
        out.impulse_sum += psi / di;
        out.mixed_sum += (1.0 + c_phi) / dm;
    }
    if (!failures.empty()) {
        std::string msg = "theta = " + fmt(theta) + " too small; nonpositive denominator on";
        for (std::size_t k = 0; k < failures.size(); ++k) msg += (k ? ", " : " ") + failures[k];
        double first_bad = 0.0;
        for (std::size_t k = 0; k < out.denominators.size(); ++k) {
            if (out.denominator_labels[k] == failures.front()) first_bad = out.denominators[k];
        }
        throw ThetaTooSmallError(msg, failures.front(), first_bad);
    }
    out.value = out.first + out.impulse_sum + out.mixed_sum;
    return out;
}

const char* mode_name(StabilityMode m) noexcept {
    switch (m) {
        case StabilityMode::BUH: return "BUH";
        case StabilityMode::GeneralizedBUH: return "generalized-BUH";
        case StabilityMode::BUHR: return "BUHR";
        case StabilityMode::GeneralizedBUHR: return "generalized-BUHR";
    }
    return "BUH";
}

std::optional<StabilityMode> parse_mode(const std::string& name) {
    for (auto m : {StabilityMode::BUH, StabilityMode::GeneralizedBUH, StabilityMode::BUHR,
                   StabilityMode::GeneralizedBUHR}) {
        if (name == mode_name(m)) return m;
    }
    return std::nullopt;
}

double evaluate_bound(StabilityMode mode, double epsilon, double constant, double psi, double phi_tau) {
    switch (mode) {
        case StabilityMode::BUH:
        case StabilityMode::GeneralizedBUH:
            return epsilon * constant;
        case StabilityMode::BUHR:
        case StabilityMode::GeneralizedBUHR:
            return epsilon * constant * (psi + phi_tau);
    }
    return 0.0;
}

BoundCheck check_bound(const PiecewiseFunction& y, const PiecewiseFunction& x, double theta, StabilityMode mode,
                       double epsilon, double constant, double psi, const TimeFn& phi, double slack) {
    if (!y.same_layout(x)) {
        throw StructureError("check_bound: y and x are sampled on different grids");
    }
    BoundCheck out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < y.segments().size(); ++s) {
        const auto& nodes = y.segments()[s].samples.grid().nodes();
        const auto& yv = y.segments()[s].samples.values();
        const auto& xv = x.segments()[s].samples.values();
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const double t = nodes[k];
            const double d = std::abs(yv[k] - xv[k]) * std::exp(-theta * t);
            const double ph = phi ? phi(t) : 1.0;
            const double margin = evaluate_bound(mode, epsilon, constant, psi, ph) - d;
            out.max_weighted_distance = std::max(out.max_weighted_distance, d);
            if (margin < out.worst_margin) {
                out.worst_margin = margin;
                out.worst_tau = t;
            }
        }
    }
    out.satisfied = out.worst_margin >= -slack;
    return out;
}

StabilityReport certify(const ImpulsiveProblem& problem, const HypothesisData& hyp, const PiecewiseFunction& y,
                        const StabilityConfig& config, StabilityMode mode, const CertifyOptions& options) {
    validate_problem(problem);
    const Partition& part = problem.partition;
    const double T = part.T();
    StabilityReport rep;
    rep.mode = mode;
    rep.theta = options.theta > 0.0 ? options.theta
                                    : recommended_theta(part, hyp, problem.alpha, problem.beta);

    const bool rassias = mode == StabilityMode::BUHR || mode == StabilityMode::GeneralizedBUHR;
    TimeFn phi = rassias ? config.phi : TimeFn([](double) { return 1.0; });
    if (!phi) throw DomainError("certify: a comparison function phi is required for " + std::string(mode_name(mode)));
    rep.psi = rassias ? config.psi : 1.0;

    if (!rassias) {
        rep.c_phi = std::pow(T, problem.alpha) / gamma_fn(1.0 + problem.alpha);
    } else if (config.c_phi) {
        rep.c_phi = *config.c_phi;
    } else {
        const double density = static_cast<double>(y.segments().front().samples.grid().panels()) /
                               y.segments().front().samples.grid().b();
        const auto sampled = SampledFunction::sample(Grid::uniform(0.0, T, panels_for(T, density)), phi);
        const auto dom = check_phi_domination(sampled, problem.alpha);
        if (!dom.ok) throw DomainError("certify: " + dom.failure);
        rep.c_phi = dom.c_phi;
    }

    ResidualOptions ro;
    ro.phi = phi;
    ro.psi = rep.psi;
    ro.candidate = options.candidate;
    rep.profile = residual_profile(problem, y, ro);

    if (mode == StabilityMode::GeneralizedBUHR) {
        rep.epsilon = 1.0;
    } else if (config.epsilon > 0.0) {
        rep.epsilon = config.epsilon;
    } else {
        rep.epsilon = rep.profile.epsilon_for_phi.value_or(0.0);
    }
    rep.premise_holds = rep.profile.epsilon_for_phi.has_value() &&
                        *rep.profile.epsilon_for_phi <= rep.epsilon * (1.0 + 1e-12) + options.slack;

    if (options.constant_override) {
        rep.constant = *options.constant_override;
        rep.constant_overridden = true;
        try {
            rep.computed_constant = stability_constant(part, hyp, problem.alpha, problem.beta, rep.theta,
                                                       options.exponents, rep.c_phi, rep.psi);
        } catch (const ThetaTooSmallError&) {
        }
    } else {
        rep.computed_constant = stability_constant(part, hyp, problem.alpha, problem.beta, rep.theta,
                                                   options.exponents, rep.c_phi, rep.psi);
        rep.constant = rep.computed_constant->value;
    }

    ImpulsiveProblem shifted = problem;
    shifted.x0 = y.segments().front().samples.values().front();
    SolverConfig sc = options.solver;
    sc.theta = BieleckiWeight{rep.theta};
    PicardOperator op(shifted, y);
    auto solved = solve_picard(shifted, sc, op.initial_iterate());
    rep.solve_trace = solved.trace;

    const auto chk = check_bound(y, solved.solution, rep.theta, mode, rep.epsilon, rep.constant, rep.psi, phi,
                                 options.slack);
    rep.bound_satisfied = chk.satisfied;
    rep.worst_margin = chk.worst_margin;
    rep.worst_tau = chk.worst_tau;
    rep.max_weighted_distance = chk.max_weighted_distance;
    rep.solution = std::move(solved.solution);
    return rep;
}

}  // namespace fracimp
