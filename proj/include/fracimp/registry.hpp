#pragma once

// Built-in functions referenced from configs as "@name", and the constants
// of the worked two-branch example (orders 2/3, impulse on (1, 2]).

#include <string>
#include <vector>

#include "fracimp/problem.hpp"

namespace fracimp {

enum class FunctionKind { Drift, State, Time };

const char* kind_name(FunctionKind k) noexcept;

struct RegistryEntry {
    std::string name;
    FunctionKind kind = FunctionKind::Time;
    DriftFn drift;
    StateFn state;
    TimeFn time;
    std::string description;
};

/// nullptr when the name is not registered.
const RegistryEntry* find_registry_entry(const std::string& name);

std::vector<std::string> registry_names();

namespace example51 {

inline constexpr double kOrder = 2.0 / 3.0;
inline constexpr double kTau1 = 1.0;
inline constexpr double kSigma1 = 2.0;
inline constexpr double kT = 3.0;
inline constexpr double kMf = 0.5;
inline constexpr double kNf = 1.0;
inline constexpr double kKh = 3.0;
double impulse_lipschitz();  ///< 4 / Gamma(4/3)
inline constexpr double kPhiScale = 2.8361;
inline constexpr double kPublishedTheta = 46.2473;
inline constexpr double kPublishedFirstResidualBound = 4.5495;
inline constexpr double kPublishedLastResidualBound = 2.8361;
inline constexpr double kPublishedConstantNumerator = 7.5188;  ///< L = 7.5188 sqrt(3) / (Gamma(2/3) sqrt(2 theta))
inline constexpr double kPublishedStabilityConstant = 1.0;
inline constexpr double kCheckTheta = 48.6;

double g(double tau);
double f(double tau, double x, double v);
double h(double tau, double x);
double h1(double tau, double x);
double phi(double tau);
/// tau on [0,1] and (2,3], tau - 1 on (1,2].
double candidate(double tau);
/// tau^2 on (0,1] and (2,3], tau - 1 on (1,2]; the closed form printed with the example.
double printed_solution(double tau);

Partition partition();
ImpulsiveProblem problem();
HypothesisData hypothesis();

}  // namespace example51

}  // namespace fracimp
