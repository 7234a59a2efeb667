#pragma once

// Gamma, Beta, the Beta-type power integral, and the one-parameter
// Mittag-Leffler function. All functions are pure and thread-safe.

namespace fracimp {

/// Gamma function for x > 0. Throws DomainError for x <= 0 and RangeError
/// when the result overflows a double (x > ~171.6).
double gamma_fn(double x);

/// log Gamma(x) for x > 0.
double log_gamma_fn(double x);

struct BetaArgs {
    double xi = 1.0;
    double sigma_arg = 1.0;
};

/// B(xi, sigma) = Gamma(xi) Gamma(sigma) / Gamma(xi + sigma).
double beta_fn(BetaArgs args);

/// Arguments of the power integral
///   int_0^tau (tau^a - s^a)^{p(beta-1)} s^{p(gamma-1)} ds
/// where a = alpha_exp. alpha_exp is a shape exponent, not a Caputo order.
struct PowerIntegralArgs {
    double alpha_exp = 1.0;
    double p = 1.0;
    double beta_exp = 1.0;
    double gamma_exp = 1.0;
    double tau = 0.0;

    /// Exponent of tau in the closed form: p[a(beta-1) + gamma - 1] + 1.
    double theta_exponent() const noexcept;
    /// p(gamma-1)+1, must be positive.
    double lower_shape() const noexcept;
    /// p(beta-1)+1, must be positive.
    double upper_shape() const noexcept;
};

/// Closed form (tau^theta / a) * B((p(gamma-1)+1)/a, p(beta-1)+1).
double weighted_power_integral(const PowerIntegralArgs& args);

/// Largest admissible z^(1/alpha) for z >= 0 before the series overflows.
inline constexpr double kMittagLefflerPositiveBound = 650.0;
/// Largest admissible |z|^(1/alpha) for z < 0; beyond it the alternating
/// series loses more than ~1e-9 relative accuracy to cancellation.
inline constexpr double kMittagLefflerNegativeBound = 5.0;

/// E_alpha(z) = sum_k z^k / Gamma(alpha k + 1), alpha in (0, 2].
///
/// Truncation: terms are summed (Neumaier-compensated) until, past the
/// largest term, |term| < 1e-16 * |partial sum| for two consecutive terms.
/// Throws DomainError for alpha outside (0, 2] and RangeError when
/// |z|^(1/alpha) exceeds the bounds above.
double mittag_leffler(double alpha, double z);

}  // namespace fracimp
