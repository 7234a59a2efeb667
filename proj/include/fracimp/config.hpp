#pragma once

// Sectioned key = value problem configs.
//
//   [problem]    name, alpha, beta, tau_points = [tau_1, ..., T], sigma_points = [...], x0
//   [functions]  f, h, h1..hm, phi, candidate, reference
//   [hypothesis] variant, M_f, N_f, K_h, L_h = [...], gamma_f, gamma_imp, form, p, p1
//   [solver]     theta, tolerance, sup_tolerance, max_iterations, grid_density, seed
//   [stability]  mode, epsilon, psi, c_phi, constant
//
// Numbers accept constant expressions ("2/3", "4/gamma(4/3)"). Functions are
// "@registry.name" or an expression in tau, x, v, sigma, where sigma is the
// left end of the interval containing tau. theta, epsilon, c_phi and
// constant accept "auto". Lines starting with '#' are comments; unknown
// sections and keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracimp/analysis.hpp"
#include "fracimp/problem.hpp"

namespace fracimp {

struct SolverSettings {
    std::optional<double> theta;  ///< empty: 1.05 x threshold (or 1.0 without hypothesis)
    double tolerance = 1e-10;
    double sup_tolerance = 0.0;
    std::size_t max_iterations = 500;
    double grid_density = kDefaultGridDensity;
    std::uint64_t seed = 20240531;

    bool operator==(const SolverSettings&) const = default;
};

struct StabilitySettings {
    StabilityMode mode = StabilityMode::GeneralizedBUHR;
    std::optional<double> epsilon;   ///< empty: residual-derived
    double psi = 0.0;
    std::optional<double> c_phi;     ///< empty: computed from phi
    std::optional<double> constant;  ///< empty: computed stability constant

    bool operator==(const StabilitySettings&) const = default;
};

struct HypothesisSettings {
    HypothesisData data;
    ConstantForm form = ConstantForm::Derivation;
    std::optional<double> p;
    std::optional<double> p1;
};

struct ProblemConfig {
    std::string name = "problem";
    double alpha = 0.5;
    double beta = 0.5;
    Partition partition = Partition::without_impulses(1.0);
    double x0 = 0.0;

    std::string f = "0";
    std::string h = "0";
    std::vector<std::string> impulse;  ///< h1..hm sources
    std::string phi;                   ///< empty: none
    std::string candidate;
    std::string reference;

    std::optional<HypothesisSettings> hypothesis;
    SolverSettings solver;
    StabilitySettings stability;
};

/// Throws ConfigError (with the offending line) on malformed input.
ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);

/// Text that parse_config maps back to an identical config.
std::string serialize_config(const ProblemConfig& config);

/// Names of fields that differ; empty when the configs are identical.
std::vector<std::string> config_differences(const ProblemConfig& a, const ProblemConfig& b);

ImpulsiveProblem build_problem(const ProblemConfig& config);
/// Empty function when the source is empty.
TimeFn build_time_function(const ProblemConfig& config, const std::string& source, const std::string& label);
std::optional<HolderExponents> build_exponents(const ProblemConfig& config);

/// Sources of the built-in configs.
ProblemConfig example51_config();
/// Single interval, order 1/2, f = 1, x0 = 0, T = 1.
ProblemConfig half_order_config();
std::vector<ProblemConfig> builtin_configs();

}  // namespace fracimp
