#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "fracimp/errors.hpp"
#include "fracimp/special_functions.hpp"

using namespace fracimp;

namespace {

// Direct quadrature of int_0^tau (tau^a - s^a)^{p(b-1)} s^{p(g-1)} ds.
double power_integral_quadrature(const PowerIntegralArgs& q) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double ta = std::pow(q.tau, q.alpha_exp);
    auto integrand = [&](double s, double xc) {
        const double dist = s < 0.5 * q.tau ? q.tau - s : std::abs(xc);
        const double gap = s < 0.5 * q.tau ? ta - std::pow(s, q.alpha_exp)
                                           : -ta * std::expm1(q.alpha_exp * std::log1p(-dist / q.tau));
        return std::pow(gap, q.p * (q.beta_exp - 1.0)) * std::pow(s, q.p * (q.gamma_exp - 1.0));
    };
    return ts.integrate(integrand, 0.0, q.tau, 1e-12);
}

}  // namespace

TEST_CASE("gamma matches known values and the recurrence") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(gamma_fn(6.0) == doctest::Approx(120.0).epsilon(1e-14));
    for (double x = 0.1; x <= 50.0; x += 0.37) {
        CHECK(std::abs(gamma_fn(x + 1.0) / (x * gamma_fn(x)) - 1.0) <= 1e-11);
    }
    CHECK(log_gamma_fn(200.0) == doctest::Approx(std::lgamma(200.0)).epsilon(1e-14));
}

TEST_CASE("gamma rejects nonpositive arguments and overflow") {
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-2.5), DomainError);
    CHECK_THROWS_AS(gamma_fn(std::nan("")), DomainError);
    CHECK_THROWS_AS(gamma_fn(180.0), RangeError);
}

TEST_CASE("beta is symmetric and equals the gamma ratio") {
    CHECK(beta_fn({2.0, 3.0}) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    CHECK(beta_fn({0.5, 0.5}) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 30.0);
    for (int k = 0; k < 50; ++k) {
        const double a = u(rng), b = u(rng);
        const double ratio = std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
        CHECK(std::abs(beta_fn({a, b}) / ratio - 1.0) <= 1e-10);
        CHECK(beta_fn({a, b}) == doctest::Approx(beta_fn({b, a})).epsilon(1e-14));
    }
    CHECK(beta_fn({300.0, 400.0}) > 0.0);
    CHECK_THROWS_AS(beta_fn({0.0, 1.0}), DomainError);
}

TEST_CASE("weighted power integral closed form matches quadrature") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int checked = 0;
    while (checked < 20) {
        PowerIntegralArgs q;
        q.alpha_exp = 0.3 + 1.5 * u01(rng);
        q.p = 1.0 + 2.0 * u01(rng);
        q.beta_exp = 0.55 + 0.45 * u01(rng);
        q.gamma_exp = 0.6 + 1.0 * u01(rng);
        q.tau = 0.2 + 2.8 * u01(rng);
        if (q.lower_shape() <= 0.1 || q.upper_shape() <= 0.1) continue;
        const double closed = weighted_power_integral(q);
        const double quad = power_integral_quadrature(q);
        CHECK(std::abs(closed / quad - 1.0) <= 1e-6);
        ++checked;
    }
}

TEST_CASE("weighted power integral special cases and preconditions") {
    // a = 1, p = 1, beta = 1, gamma = 1: the integral of 1 over [0, tau].
    CHECK(weighted_power_integral({1.0, 1.0, 1.0, 1.0, 2.5}) == doctest::Approx(2.5));
    // a = 1, p = 1: tau^{beta+gamma-1} B(gamma, beta).
    CHECK(weighted_power_integral({1.0, 1.0, 0.5, 2.0, 1.0}) == doctest::Approx(beta_fn({2.0, 0.5})));
    CHECK(weighted_power_integral({1.0, 1.0, 1.0, 1.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(weighted_power_integral({1.0, 2.0, 0.4, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(weighted_power_integral({1.0, 2.0, 1.0, 0.4, 1.0}), DomainError);
    CHECK_THROWS_AS(weighted_power_integral({0.0, 1.0, 1.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(weighted_power_integral({1.0, 1.0, 1.0, 1.0, -1.0}), DomainError);
}

TEST_CASE("Mittag-Leffler reduces to elementary functions") {
    CHECK(mittag_leffler(1.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(mittag_leffler(2.0, 1.0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
    CHECK(mittag_leffler(0.7, 0.0) == 1.0);
    for (double z : {-3.0, -1.0, -0.2, 0.3, 2.0, 10.0}) {
        CHECK(mittag_leffler(1.0, z) == doctest::Approx(std::exp(z)).epsilon(1e-11));
    }
    for (double z : {-2.0, -1.0, -0.2, 0.3, 2.0, 10.0}) {
        CHECK(mittag_leffler(0.5, z) == doctest::Approx(std::exp(z * z) * std::erfc(-z)).epsilon(1e-9));
    }
    for (double z : {0.5, 4.0, 25.0}) {
        CHECK(mittag_leffler(2.0, z) == doctest::Approx(std::cosh(std::sqrt(z))).epsilon(1e-11));
        CHECK(mittag_leffler(2.0, -z) == doctest::Approx(std::cos(std::sqrt(z))).epsilon(1e-9));
    }
}

TEST_CASE("Mittag-Leffler is increasing for positive arguments") {
    double prev = 1.0;
    for (double z = 0.1; z < 20.0; z += 0.1) {
        const double e = mittag_leffler(2.0 / 3.0, z);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("Mittag-Leffler domain") {
    CHECK_THROWS_AS(mittag_leffler(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(mittag_leffler(2.5, 1.0), DomainError);
    CHECK_THROWS_AS(mittag_leffler(1.0, 700.0), RangeError);
    CHECK_THROWS_AS(mittag_leffler(1.0, -6.0), RangeError);
}
