#pragma once

// JSON and CSV serialization of solutions and reports. Floating-point values
// are written with 17 significant digits; non-finite values become null.

#include <string>

#include <json.hpp>

#include "fracimp/analysis.hpp"
#include "fracimp/fractional_calculus.hpp"
#include "fracimp/picard.hpp"

namespace fracimp {

inline constexpr int kSchemaVersion = 1;

/// Deterministic rendering: object keys sorted, doubles as %.17g.
std::string dump_json(const nlohmann::json& value, int indent = 2);

/// Columns tau, value, segment_index, branch_tag. Node 0 of each segment is
/// written at its breakpoint and carries the right limit.
std::string solution_csv(const PiecewiseFunction& x);

nlohmann::json to_json(const HypothesisData& hyp);
nlohmann::json to_json(const SolveTrace& trace);
nlohmann::json to_json(const AnalysisReport& report);
nlohmann::json to_json(const ResidualProfile& profile);
nlohmann::json to_json(const StabilityConstant& c);
nlohmann::json to_json(const StabilityReport& report);

}  // namespace fracimp
