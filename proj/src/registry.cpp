#include "fracimp/registry.hpp"

#include <cmath>

#include "fracimp/special_functions.hpp"

namespace fracimp {

const char* kind_name(FunctionKind k) noexcept {
    switch (k) {
        case FunctionKind::Drift: return "f(tau, x, v)";
        case FunctionKind::State: return "h(tau, x)";
        case FunctionKind::Time: return "phi(tau)";
    }
    return "";
}

namespace example51 {

double impulse_lipschitz() { return 4.0 / gamma_fn(4.0 / 3.0); }

double g(double tau) {
    static const double c = 9.0 / (2.0 * gamma_fn(1.0 / 3.0));
    if (tau <= 1.0) return c * std::pow(tau, 4.0 / 3.0) - 0.25;
    if (tau <= 2.0) return 0.0;
    return c * std::pow(tau - 2.0, 4.0 / 3.0) - (std::cos(4.0) + std::sin(4.0)) / (4.0 * std::exp(4.0));
}

double f(double tau, double x, double v) {
    return g(tau) + std::exp(-tau * tau) * (std::sin(x) + std::cos(x)) / 4.0 + v;
}

double h(double tau, double x) { return tau * std::exp(-tau * tau) * std::sin(x); }

double h1(double tau, double x) {
    static const double c = 1.0 / gamma_fn(4.0 / 3.0);
    const double ax = std::abs(x);
    return c * tau * std::cbrt(tau - 1.0) / (tau - 4.0) * (ax - 3.0) / (ax + 1.0);
}

double phi(double tau) { return kPhiScale * mittag_leffler(kOrder, std::pow(tau, kOrder)); }

double candidate(double tau) { return (tau > 1.0 && tau <= 2.0) ? tau - 1.0 : tau; }

double printed_solution(double tau) { return (tau > 1.0 && tau <= 2.0) ? tau - 1.0 : tau * tau; }

Partition partition() { return Partition{{kTau1, kT}, {kSigma1}}; }

ImpulsiveProblem problem() {
    ImpulsiveProblem p;
    p.alpha = kOrder;
    p.beta = kOrder;
    p.partition = partition();
    p.f = f;
    p.h = h;
    p.impulse_maps = {h1};
    p.x0 = 0.0;
    return p;
}

HypothesisData hypothesis() {
    HypothesisData d;
    d.M_f = kMf;
    d.N_f = kNf;
    d.K_h = kKh;
    d.L_h = {impulse_lipschitz()};
    return d;
}

}  // namespace example51

namespace {

std::vector<RegistryEntry> make_registry() {
    std::vector<RegistryEntry> r;
    auto drift = [&](std::string n, DriftFn fn, std::string d) {
        r.push_back({std::move(n), FunctionKind::Drift, std::move(fn), {}, {}, std::move(d)});
    };
    auto state = [&](std::string n, StateFn fn, std::string d) {
        r.push_back({std::move(n), FunctionKind::State, {}, std::move(fn), {}, std::move(d)});
    };
    auto time = [&](std::string n, TimeFn fn, std::string d) {
        r.push_back({std::move(n), FunctionKind::Time, {}, {}, std::move(fn), std::move(d)});
    };
    drift("example51.f", example51::f, "g(tau) + e^{-tau^2}(sin x + cos x)/4 + v");
    time("example51.g", example51::g, "piecewise forcing term of example51.f");
    state("example51.h", example51::h, "tau e^{-tau^2} sin x");
    state("example51.h1", example51::h1, "tau (tau-1)^{1/3} / (tau-4) (|x|-3)/(|x|+1) / Gamma(4/3)");
    time("example51.phi", example51::phi, "2.8361 E_{2/3}(tau^{2/3})");
    time("example51.candidate", example51::candidate, "tau, tau - 1 on (1, 2]");
    time("example51.printed_solution", example51::printed_solution, "tau^2, tau - 1 on (1, 2]");
    time("mittag_leffler_half", [](double t) { return mittag_leffler(0.5, std::sqrt(t)); },
         "E_{1/2}(tau^{1/2})");
    return r;
}

const std::vector<RegistryEntry>& registry() {
    static const std::vector<RegistryEntry> r = make_registry();
    return r;
}

}  // namespace

const RegistryEntry* find_registry_entry(const std::string& name) {
    for (const auto& e : registry()) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

std::vector<std::string> registry_names() {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.name);
    return out;
}

}  // namespace fracimp
