#pragma once

// The impulsive problem datum, its hypothesis constants, stability settings,
// and empirical Lipschitz estimation by sampling.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracimp/partition.hpp"

namespace fracimp {

/// f(tau, x, v) where v is the running integral of h along the state.
using DriftFn = std::function<double(double tau, double x, double v)>;
/// h(tau, x) and the impulse maps h_i(tau, x).
using StateFn = std::function<double(double tau, double x)>;
/// Scalar function of tau (comparison functions, closed-form candidates).
using TimeFn = std::function<double(double tau)>;

struct ImpulsiveProblem {
    double alpha = 0.5;
    double beta = 0.5;
    Partition partition;
    DriftFn f;
    StateFn h;
    std::vector<StateFn> impulse_maps;
    double x0 = 0.0;
};

/// Throws DomainError / StructureError when orders, partition, or the
/// number of impulse maps are inconsistent.
void validate_problem(const ImpulsiveProblem& problem);

enum class HypothesisVariant { Basic, Weighted };

const char* variant_name(HypothesisVariant v) noexcept;

/// Lipschitz data. Basic: |f(t,x,v)-f(t,y,w)| <= M_f|x-y| + N_f|v-w|,
/// |h(t,x)-h(t,y)| <= K_h|x-y|, |h_i(t,x)-h_i(t,y)| <= L_h[i-1]|x-y|.
/// Weighted: the x-slope of f carries tau^gamma_f, each h_i carries tau^gamma_imp.
struct HypothesisData {
    double M_f = 0.0;
    double N_f = 0.0;
    double K_h = 0.0;
    std::vector<double> L_h;
    HypothesisVariant variant = HypothesisVariant::Basic;
    double gamma_f = 0.0;
    double gamma_imp = 0.0;

    /// Copy with every Lipschitz constant multiplied by `factor`.
    HypothesisData scaled(double factor) const;
};

/// Constants must be finite and nonnegative, L_h must have m entries, and
/// the weighted exponents must satisfy gamma_f > -alpha, gamma_imp > -beta.
void validate_hypothesis(const HypothesisData& hyp, double alpha, double beta, std::size_t m);

struct StabilityConfig {
    double epsilon = 1.0;
    double psi = 0.0;
    TimeFn phi;
    std::optional<double> c_phi;  ///< empty: compute from phi
};

struct SamplingConfig {
    double x_box = 10.0;        ///< x, v drawn from [-x_box, x_box]
    std::size_t pairs = 20000;  ///< random pairs per constant
    std::uint64_t seed = 20240531;
    bool local_probes = true;   ///< add nearby pairs and a deterministic lattice
};

/// Largest observed difference quotients. These are lower bounds on the
/// true constants; the variant is Basic.
HypothesisData estimate_lipschitz(const ImpulsiveProblem& problem, const SamplingConfig& config = {});

}  // namespace fracimp
