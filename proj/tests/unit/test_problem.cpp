#include <doctest.h>

#include <cmath>

#include "fracimp/errors.hpp"
#include "fracimp/problem.hpp"
#include "fracimp/registry.hpp"

using namespace fracimp;

namespace {

ImpulsiveProblem affine_problem() {
    ImpulsiveProblem p;
    p.alpha = 0.7;
    p.beta = 0.6;
    p.partition = Partition{{1.0, 2.0}, {1.5}};
    p.f = [](double t, double x, double v) { return 0.3 * x - 0.8 * v + t; };
    p.h = [](double, double x) { return -1.7 * x; };
    p.impulse_maps = {[](double t, double x) { return 0.45 * x + t; }};
    return p;
}

}  // namespace

TEST_CASE("problem validation") {
    CHECK_NOTHROW(validate_problem(affine_problem()));
    auto p = affine_problem();
    p.alpha = 1.2;
    CHECK_THROWS_AS(validate_problem(p), DomainError);
    p = affine_problem();
    p.impulse_maps.clear();
    CHECK_THROWS_AS(validate_problem(p), StructureError);
    p = affine_problem();
    p.partition = Partition{{2.0, 1.0}, {1.5}};
    CHECK_THROWS_AS(validate_problem(p), DomainError);
    p = affine_problem();
    p.f = nullptr;
    CHECK_THROWS(validate_problem(p));
}

TEST_CASE("hypothesis validation") {
    HypothesisData h{0.1, 0.2, 0.3, {0.4}};
    CHECK_NOTHROW(validate_hypothesis(h, 0.7, 0.6, 1));
    CHECK_THROWS_AS(validate_hypothesis(h, 0.7, 0.6, 2), StructureError);
    h.M_f = -1.0;
    CHECK_THROWS_AS(validate_hypothesis(h, 0.7, 0.6, 1), DomainError);
    HypothesisData w{0.1, 0.2, 0.3, {0.4}, HypothesisVariant::Weighted, -0.8, 0.0};
    CHECK_THROWS_AS(validate_hypothesis(w, 0.7, 0.6, 1), DomainError);
    const auto s = HypothesisData{1.0, 2.0, 3.0, {4.0}}.scaled(0.5);
    CHECK(s.N_f == 1.0);
    CHECK(s.L_h[0] == 2.0);
}

TEST_CASE("sampled Lipschitz constants recover affine slopes") {
    const auto est = estimate_lipschitz(affine_problem());
    CHECK(est.M_f == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(est.N_f == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(est.K_h == doctest::Approx(1.7).epsilon(1e-9));
    CHECK(est.L_h.at(0) == doctest::Approx(0.45).epsilon(1e-9));
}

TEST_CASE("sampled Lipschitz constants are reproducible for a seed") {
    SamplingConfig sc;
    sc.pairs = 2000;
    const auto a = estimate_lipschitz(example51::problem(), sc);
    const auto b = estimate_lipschitz(example51::problem(), sc);
    CHECK(a.M_f == b.M_f);
    CHECK(a.K_h == b.K_h);
    CHECK(a.L_h == b.L_h);
    CHECK(a.M_f <= 0.5);
    CHECK(a.K_h <= 3.0);
}
