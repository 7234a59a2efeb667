#include "fracimp/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fracimp/errors.hpp"

namespace fracimp {

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + " requires a positive finite argument, got " +
                          std::to_string(x));
    }
}

}  // namespace

double gamma_fn(double x) {
    require_positive(x, "gamma_fn");
    const double g = std::tgamma(x);
    if (!std::isfinite(g)) {
        throw RangeError("gamma_fn overflows for x = " + std::to_string(x));
    }
    return g;
}

double log_gamma_fn(double x) {
    require_positive(x, "log_gamma_fn");
    return std::lgamma(x);
}

double beta_fn(BetaArgs args) {
    require_positive(args.xi, "beta_fn(xi)");
    require_positive(args.sigma_arg, "beta_fn(sigma)");
    const double s = args.xi + args.sigma_arg;
    if (s < 170.0) {
        return std::tgamma(args.xi) * std::tgamma(args.sigma_arg) / std::tgamma(s);
    }
    return std::exp(std::lgamma(args.xi) + std::lgamma(args.sigma_arg) - std::lgamma(s));
}

double PowerIntegralArgs::theta_exponent() const noexcept {
    return p * (alpha_exp * (beta_exp - 1.0) + gamma_exp - 1.0) + 1.0;
}

double PowerIntegralArgs::lower_shape() const noexcept { return p * (gamma_exp - 1.0) + 1.0; }

double PowerIntegralArgs::upper_shape() const noexcept { return p * (beta_exp - 1.0) + 1.0; }

double weighted_power_integral(const PowerIntegralArgs& args) {
    if (!(args.alpha_exp > 0.0)) {
        throw DomainError("weighted_power_integral: alpha_exp must be positive");
    }
    if (!(args.lower_shape() > 0.0)) {
        throw DomainError("weighted_power_integral: p(gamma-1)+1 > 0 fails");
    }
    if (!(args.upper_shape() > 0.0)) {
        throw DomainError("weighted_power_integral: p(beta-1)+1 > 0 fails");
    }
    if (!(args.tau >= 0.0) || !std::isfinite(args.tau)) {
        throw DomainError("weighted_power_integral: tau must be nonnegative");
    }
    if (args.tau == 0.0) {
        return 0.0;
    }
    const double b = beta_fn({args.lower_shape() / args.alpha_exp, args.upper_shape()});
    return std::pow(args.tau, args.theta_exponent()) / args.alpha_exp * b;
}

double mittag_leffler(double alpha, double z) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw DomainError("mittag_leffler: alpha must lie in (0, 2]");
    }
    if (!std::isfinite(z)) {
        throw RangeError("mittag_leffler: non-finite argument");
    }
    if (z == 0.0) {
        return 1.0;
    }
    const double scaled = std::pow(std::abs(z), 1.0 / alpha);
    if (z > 0.0 && scaled > kMittagLefflerPositiveBound) {
        throw RangeError("mittag_leffler: z^(1/alpha) exceeds the overflow bound");
    }
    if (z < 0.0 && scaled > kMittagLefflerNegativeBound) {
        throw RangeError("mittag_leffler: |z|^(1/alpha) exceeds the cancellation bound");
    }

    const double log_abs_z = std::log(std::abs(z));
    double sum = 1.0;
    double compensation = 0.0;
    double previous = 1.0;
    int small_run = 0;
    for (int k = 1; k < 100000; ++k) {
        const double arg = alpha * k + 1.0;
        double magnitude;
        if (arg < 170.0 && std::abs(k * log_abs_z) < 700.0) {
            magnitude = std::pow(std::abs(z), k) / std::tgamma(arg);
        } else {
            magnitude = std::exp(k * log_abs_z - std::lgamma(arg));
        }
        const double term = (z < 0.0 && (k % 2 == 1)) ? -magnitude : magnitude;

        // Neumaier summation
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            compensation += (sum - t) + term;
        } else {
            compensation += (term - t) + sum;
        }
        sum = t;

        const bool past_peak = magnitude <= previous;
        previous = magnitude;
        if (past_peak && magnitude < 1e-16 * std::abs(sum + compensation)) {
            if (++small_run == 2) {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    return sum + compensation;
}

}  // namespace fracimp
