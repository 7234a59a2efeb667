#include "fracimp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fracimp/errors.hpp"

namespace fracimp {

void validate_problem(const ImpulsiveProblem& problem) {
    if (!(problem.alpha > 0.0 && problem.alpha < 1.0)) {
        throw DomainError("alpha must lie in (0, 1)");
    }
    if (!(problem.beta > 0.0 && problem.beta < 1.0)) {
        throw DomainError("beta must lie in (0, 1)");
    }
    const auto check = validate_partition(problem.partition);
    if (!check) {
        throw DomainError("invalid partition: " + check.violation);
    }
    if (problem.impulse_maps.size() != problem.partition.m()) {
        throw StructureError("expected " + std::to_string(problem.partition.m()) + " impulse maps, got " +
                             std::to_string(problem.impulse_maps.size()));
    }
    if (!problem.f || !problem.h) {
        throw StructureError("f and h must be set");
    }
    for (std::size_t i = 0; i < problem.impulse_maps.size(); ++i) {
        if (!problem.impulse_maps[i]) {
            throw StructureError("impulse map h_" + std::to_string(i + 1) + " is not set");
        }
    }
    if (!std::isfinite(problem.x0)) {
        throw DomainError("x0 must be finite");
    }
}

const char* variant_name(HypothesisVariant v) noexcept {
    return v == HypothesisVariant::Basic ? "basic" : "weighted";
}

HypothesisData HypothesisData::scaled(double factor) const {
    HypothesisData out = *this;
    out.M_f *= factor;
    out.N_f *= factor;
    out.K_h *= factor;
    for (double& l : out.L_h) l *= factor;
    return out;
}

void validate_hypothesis(const HypothesisData& hyp, double alpha, double beta, std::size_t m) {
    auto nonneg = [](double v, const std::string& name) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError(name + " must be finite and nonnegative");
        }
    };
    nonneg(hyp.M_f, "M_f");
    nonneg(hyp.N_f, "N_f");
    nonneg(hyp.K_h, "K_h");
    if (hyp.L_h.size() != m) {
        throw StructureError("expected " + std::to_string(m) + " impulse constants L_h, got " +
                             std::to_string(hyp.L_h.size()));
    }
    for (std::size_t i = 0; i < m; ++i) {
        nonneg(hyp.L_h[i], "L_h_" + std::to_string(i + 1));
    }
    if (hyp.variant == HypothesisVariant::Weighted) {
        if (!(hyp.gamma_f > -alpha)) {
            throw DomainError("gamma_f > -alpha fails");
        }
        if (!(hyp.gamma_imp > -beta)) {
            throw DomainError("gamma_imp > -beta fails");
        }
    }
}

namespace {

double quotient(double fa, double fb, double a, double b) {
    const double d = std::abs(a - b);
    if (!(d > 0.0) || !std::isfinite(fa) || !std::isfinite(fb)) {
        return 0.0;
    }
    return std::abs(fa - fb) / d;
}

// Pairs (x, y) probed for one tau: random, nearby, and lattice points.
struct Prober {
    const SamplingConfig& config;
    std::mt19937_64 rng;

    explicit Prober(const SamplingConfig& c, std::uint64_t salt) : config(c), rng(c.seed ^ salt) {}

    template <class Quot>
    double run(double lo, double hi, Quot&& q) {
        std::uniform_real_distribution<double> tau_dist(lo, hi);
        std::uniform_real_distribution<double> x_dist(-config.x_box, config.x_box);
        double best = 0.0;
        for (std::size_t k = 0; k < config.pairs; ++k) {
            const double t = tau_dist(rng);
            const double a = x_dist(rng);
            const double b = x_dist(rng);
            const double w = x_dist(rng);
            best = std::max(best, q(t, a, b, w));
            if (config.local_probes) {
                const double delta = 1e-4 * (1.0 + std::abs(a));
                best = std::max(best, q(t, a, a + delta, w));
            }
        }
        if (config.local_probes) {
            const int nt = 64;
            const int nx = 201;
            for (int i = 0; i <= nt; ++i) {
                const double t = lo + (hi - lo) * i / nt;
                for (int j = 0; j < nx; ++j) {
                    const double a = -config.x_box + 2.0 * config.x_box * j / (nx - 1);
                    const double delta = 1e-4 * (1.0 + std::abs(a));
                    best = std::max(best, q(t, a, a + delta, 0.0));
                }
            }
        }
        return best;
    }
};

}  // namespace

HypothesisData estimate_lipschitz(const ImpulsiveProblem& problem, const SamplingConfig& config) {
    validate_problem(problem);
    const Partition& p = problem.partition;
    HypothesisData est;
    est.variant = HypothesisVariant::Basic;

    est.M_f = Prober(config, 1).run(0.0, p.T(), [&](double t, double a, double b, double v) {
        return quotient(problem.f(t, a, v), problem.f(t, b, v), a, b);
    });
    est.N_f = Prober(config, 2).run(0.0, p.T(), [&](double t, double a, double b, double x) {
        return quotient(problem.f(t, x, a), problem.f(t, x, b), a, b);
    });
    est.K_h = Prober(config, 3).run(0.0, p.T(), [&](double t, double a, double b, double) {
        return quotient(problem.h(t, a), problem.h(t, b), a, b);
    });
    for (std::size_t i = 1; i <= p.m(); ++i) {
        const auto& hi = problem.impulse_maps[i - 1];
        const double lo = p.tau(i);
        const double up = p.sigma(i);
        if (!(up > lo)) {
            est.L_h.push_back(0.0);
            continue;
        }
        est.L_h.push_back(Prober(config, 10 + i).run(lo, up, [&](double t, double a, double b, double) {
            if (!(t > lo)) return 0.0;
            return quotient(hi(t, a), hi(t, b), a, b);
        }));
    }
    return est;
}

}  // namespace fracimp
