#include <doctest.h>

#include <cmath>
#include <string>

#include "fracimp/config.hpp"
#include "fracimp/errors.hpp"
#include "fracimp/registry.hpp"

using namespace fracimp;

namespace {

const char* kMinimal = R"(
[problem]
alpha = 0.5
beta = 0.5
tau_points = [1]
x0 = 0

[functions]
f = 1
h = 0
)";

std::string with_problem_lines(const std::string& extra) {
    return "[problem]\nalpha = 0.5\nbeta = 0.5\ntau_points = [1, 3]\nsigma_points = [2]\n" + extra;
}

}  // namespace

TEST_CASE("built-in configs round-trip through text") {
    for (const auto& c : builtin_configs()) {
        const std::string text = serialize_config(c);
        const ProblemConfig back = parse_config(text);
        CAPTURE(c.name);
        CHECK(config_differences(c, back).empty());
        CHECK(serialize_config(back) == text);
    }
}

TEST_CASE("minimal config and defaults") {
    const auto c = parse_config(kMinimal);
    CHECK(c.alpha == 0.5);
    CHECK(c.partition.m() == 0);
    CHECK_FALSE(c.hypothesis.has_value());
    CHECK_FALSE(c.solver.theta.has_value());
    CHECK(c.solver.grid_density == 512.0);
    const auto p = build_problem(c);
    CHECK(p.f(0.3, 1.0, 2.0) == 1.0);
}

TEST_CASE("numbers accept constant expressions") {
    auto c = parse_config(std::string(kMinimal) + "\n[solver]\ntheta = 2*pi\ntolerance = 1e-9\n");
    CHECK(*c.solver.theta == doctest::Approx(2.0 * M_PI));
    c = parse_config(with_problem_lines("[functions]\nf = 0\nh = 0\nh1 = 0\n").replace(0, 0, ""));
    CHECK(c.partition.sigma_points.at(0) == 2.0);
}

TEST_CASE("sigma binds to the start of the branch interval") {
    const auto c = parse_config(with_problem_lines("[functions]\nf = sigma\nh = 0\nh1 = sigma\n"));
    const auto p = build_problem(c);
    CHECK(p.f(0.5, 0.0, 0.0) == 0.0);
    CHECK(p.f(2.5, 0.0, 0.0) == 2.0);
    CHECK(p.impulse_maps.at(0)(1.5, 0.0) == 1.0);
}

TEST_CASE("registry references") {
    const auto c = parse_config(with_problem_lines(
        "[functions]\nf = @example51.f\nh = @example51.h\nh1 = @example51.h1\nphi = @example51.phi\n"));
    const auto p = build_problem(c);
    CHECK(p.f(0.5, 0.2, 0.1) == example51::f(0.5, 0.2, 0.1));
    CHECK(build_time_function(c, c.phi, "phi")(1.0) == example51::phi(1.0));
    CHECK_THROWS_AS(parse_config(with_problem_lines("[functions]\nf = @nope\nh = 0\nh1 = 0\n")), ConfigError);
    CHECK_THROWS_AS(parse_config(with_problem_lines("[functions]\nf = @example51.phi\nh = 0\nh1 = 0\n")), ConfigError);
}

TEST_CASE("malformed configs are rejected") {
    CHECK_THROWS_AS(parse_config(""), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[nowhere]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "f = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[solver]\ntheta = tau\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[solver]\ntolerance = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[stability]\nmode = strong\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\nalpha = 1.5\nbeta = 0.5\ntau_points = [1]\n[functions]\nf = 0\nh = 0\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(with_problem_lines("[functions]\nf = 0\nh = 0\n")), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\nalpha = 0.5\nbeta = 0.5\ntau_points = [2, 1]\nsigma_points = [3]\n"
                                 "[functions]\nf = 0\nh = 0\nh1 = 0\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[hypothesis]\nM_f = 1\nN_f = 1\nK_h = 1\nL_h = [1]\n"),
                    ConfigError);
}

TEST_CASE("config errors report the line") {
    try {
        parse_config("[problem]\nalpha = 0.5\nbeta = (0.5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("comments and blank lines are ignored") {
    const auto c = parse_config(std::string("# leading comment\n") + kMinimal + "\n# trailing\n");
    CHECK(c.f == "1");
}

TEST_CASE("hypothesis section with exponents") {
    const auto c = parse_config(with_problem_lines(
        "[functions]\nf = x\nh = 0\nh1 = x\n[hypothesis]\nvariant = weighted\nM_f = 1\nN_f = 0\nK_h = 0\n"
        "L_h = [0.5]\ngamma_f = 0.1\ngamma_imp = 0\np = 1.5\np1 = 1.5\n"));
    REQUIRE(c.hypothesis.has_value());
    CHECK(c.hypothesis->data.variant == HypothesisVariant::Weighted);
    const auto e = build_exponents(c);
    REQUIRE(e.has_value());
    CHECK(e->p_conj == doctest::Approx(3.0));
    const auto back = parse_config(serialize_config(c));
    CHECK(config_differences(c, back).empty());
}
