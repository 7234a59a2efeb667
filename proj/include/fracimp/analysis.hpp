#pragma once

// Contraction constants and Bielecki weight thresholds, weighted Hoelder
// bounds, Ulam-type residuals, stability constants and certification.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracimp/fractional_calculus.hpp"
#include "fracimp/picard.hpp"
#include "fracimp/problem.hpp"

namespace fracimp {

/// length^{order-1/2} / ((2 order - 1)^{1/2} (2 theta)^{1/2}); multiply by
/// e^{theta tau} to bound int (tau-s)^{order-1} e^{theta s} ds over an
/// interval of that length. order in (1/2, 1], theta > 0, length >= 0.
double holder_kernel_bound(double order, double theta, double length);

/// Which form of the basic constant to evaluate.
///  Derivation: impulse term with L_h, memory term N_f K_h len^{a+1/2}/sqrt(2a+1).
///  Display:    memory term N_f K_h len^{a}/sqrt(2a), the compact closed-form variant.
///  ExampleArithmetic: memory term N_f L_h len^{a+1/2}/sqrt(2a+1) on impulse-indexed
///              intervals (K_h on the first), the combination that reproduces the
///              worked example's threshold.
enum class ConstantForm { Derivation, Display, ExampleArithmetic };

const char* form_name(ConstantForm f) noexcept;

/// The three summands attached to differential interval i.
struct IntervalTerms {
    std::size_t index = 0;
    double impulse = 0.0;  ///< absent (0) for i = 0
    double drift = 0.0;    ///< M_f term
    double memory = 0.0;   ///< N_f K_h term
    double total() const noexcept { return impulse + drift + memory; }
};

struct HolderExponents {
    double p = 2.0;
    double p_conj = 2.0;
    double p1 = 2.0;
    double p1_conj = 2.0;

    static HolderExponents from(double p, double p1);
};

struct WeightedBounds {
    double omega1 = 0.0;
    double omega2 = 0.0;
};

struct AnalysisReport {
    HypothesisVariant variant = HypothesisVariant::Basic;
    ConstantForm form = ConstantForm::Derivation;
    double L = 0.0;  ///< basic constant, or the weighted L1
    std::vector<IntervalTerms> per_interval;
    double theta_used = 0.0;
    double theta_threshold = 0.0;
    std::optional<HolderExponents> exponents;
    std::optional<WeightedBounds> bounds;
};

/// Basic variant; alpha, beta in (1/2, 1) whenever the matching Hoelder term
/// has a nonzero coefficient.
AnalysisReport contraction_constant_basic(const Partition& partition, const HypothesisData& hyp,
                                          double alpha, double beta, double theta,
                                          ConstantForm form = ConstantForm::Derivation);

/// theta* = A^2/2 with A the constant at theta = 1/2.
double theta_threshold_basic(const Partition& partition, const HypothesisData& hyp, double alpha,
                             double beta, ConstantForm form = ConstantForm::Derivation);

/// Throws DomainError naming the violated exponent inequality.
void check_exponents(const HypothesisData& hyp, double alpha, double beta, const HolderExponents& e);

/// Largest admissible p (resp. p1) allowed by the exponent inequalities.
double exponent_upper_bound(double order, double gamma);

WeightedBounds weighted_bounds(double T, const HypothesisData& hyp, double alpha, double beta,
                               const HolderExponents& e);

AnalysisReport contraction_constant_weighted(const Partition& partition, const HypothesisData& hyp,
                                             double alpha, double beta, double theta,
                                             const HolderExponents& e);

/// Bisection over [1e-6, 1e12] for L1(theta) = 1 - 1e-9. Returns 0 when all
/// constants vanish and the lower bracket when L1 is already below target.
double theta_threshold_weighted(const Partition& partition, const HypothesisData& hyp, double alpha,
                                double beta, const HolderExponents& e);

/// Joint scan of p, p1 over [1.01, 1 + 0.9 (upper - 1)] (capped at 10)
/// minimizing the weighted threshold.
HolderExponents select_holder_exponents(const Partition& partition, const HypothesisData& hyp,
                                        double alpha, double beta);

/// Dispatches on hyp.variant; theta <= 0 means 1.05 * threshold.
AnalysisReport analyze(const Partition& partition, const HypothesisData& hyp, double alpha, double beta,
                       double theta, ConstantForm form = ConstantForm::Derivation,
                       std::optional<HolderExponents> exponents = std::nullopt);

/// 1.05 times the threshold of the given variant.
double recommended_theta(const Partition& partition, const HypothesisData& hyp, double alpha,
                         double beta, ConstantForm form = ConstantForm::Derivation);

// ---------------------------------------------------------------------------
// Comparison function phi: I^alpha phi <= c_phi phi.

struct PhiDomination {
    bool ok = true;
    double c_phi = 0.0;     ///< max over nodes of I^alpha phi / phi
    double argmax_tau = 0.0;
    std::string failure;
};

/// phi sampled on a grid starting at 0. Nodes where phi and I^alpha phi both
/// vanish are skipped; phi = 0 with I^alpha phi > 0, or a decrease in phi,
/// fails.
PhiDomination check_phi_domination(const SampledFunction& phi, double alpha);

/// max over nodes of I^alpha phi - c phi (<= 0 means c is admissible).
double phi_domination_excess(const SampledFunction& phi, double alpha, double c);

// ---------------------------------------------------------------------------
// Residuals of an approximate solution.

struct ResidualOptions {
    TimeFn phi;                  ///< empty: phi = 1
    double psi = 0.0;
    TimeFn candidate;            ///< closed form of y for continuous impulse integrals
    bool richardson = true;
    double impulse_exact_tol = 1e-8;
};

struct ResidualProfile {
    /// Indexed by differential interval i = 0..m; empty intervals report 0.
    std::vector<double> differential_sups;
    std::vector<double> differential_bands;
    std::vector<double> differential_argmax;
    /// Indexed by impulse interval i = 1..m (entry i-1).
    std::vector<double> impulse_sups;
    std::vector<double> impulse_bands;
    std::optional<double> epsilon_for_phi;
    std::string status = "ok";   ///< "ok", "impulse-exact required", or a phi failure
};

/// y must be sampled on the problem's uniform layout (PiecewiseFunction::sample).
ResidualProfile residual_profile(const ImpulsiveProblem& problem, const PiecewiseFunction& y,
                                 const ResidualOptions& options = {});

// ---------------------------------------------------------------------------
// Stability constants and certification.

struct StabilityConstant {
    double value = 0.0;
    double first = 0.0;                    ///< c_phi / (1 - D_0)
    double impulse_sum = 0.0;
    double mixed_sum = 0.0;
    std::vector<double> denominators;      ///< D_0, then impulse and mixed per i
    std::vector<std::string> denominator_labels;
};

/// Three-part sum c_phi/(1-D_0) + sum psi/(1-I_i) + sum (1+c_phi)/(1-I_i-F-M_i).
/// Terms come from the weighted constant (hyp weighted) or the basic
/// Derivation form (hyp basic). Throws ThetaTooSmallError on a nonpositive
/// denominator, naming the interval.
StabilityConstant stability_constant(const Partition& partition, const HypothesisData& hyp, double alpha,
                                     double beta, double theta,
                                     const std::optional<HolderExponents>& exponents, double c_phi,
                                     double psi);

enum class StabilityMode { BUH, GeneralizedBUH, BUHR, GeneralizedBUHR };

const char* mode_name(StabilityMode m) noexcept;
std::optional<StabilityMode> parse_mode(const std::string& name);

/// Bound on |y - x| e^{-theta tau} at one node.
double evaluate_bound(StabilityMode mode, double epsilon, double constant, double psi, double phi_tau);

struct CertifyOptions {
    double theta = 0.0;  ///< <= 0: recommended theta
    SolverConfig solver;
    std::optional<double> constant_override;
    std::optional<HolderExponents> exponents;
    TimeFn candidate;
    double slack = 1e-9;
};

struct StabilityReport {
    StabilityMode mode = StabilityMode::GeneralizedBUHR;
    double theta = 0.0;
    double epsilon = 0.0;
    double psi = 0.0;
    double constant = 0.0;
    bool constant_overridden = false;
    std::optional<StabilityConstant> computed_constant;
    double c_phi = 0.0;
    bool premise_holds = true;        ///< residuals within epsilon (phi, psi)
    bool bound_satisfied = false;
    double worst_margin = 0.0;
    double worst_tau = 0.0;
    double max_weighted_distance = 0.0;
    ResidualProfile profile;
    SolveTrace solve_trace;
    std::optional<PiecewiseFunction> solution;  ///< x with x(0) = y(0)
};

/// Residuals of y, epsilon, the solution x with x(0) = y(0), and the check
/// |y - x| e^{-theta tau} <= bound at every node.
StabilityReport certify(const ImpulsiveProblem& problem, const HypothesisData& hyp, const PiecewiseFunction& y,
                        const StabilityConfig& config, StabilityMode mode, const CertifyOptions& options = {});

/// Bielecki-weighted distance check given an already solved x; lower level
/// than certify, used by property tests.
struct BoundCheck {
    bool satisfied = false;
    double worst_margin = 0.0;
    double worst_tau = 0.0;
    double max_weighted_distance = 0.0;
};
BoundCheck check_bound(const PiecewiseFunction& y, const PiecewiseFunction& x, double theta, StabilityMode mode,
                       double epsilon, double constant, double psi, const TimeFn& phi, double slack = 1e-9);

}  // namespace fracimp
