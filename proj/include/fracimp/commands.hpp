#pragma once

// solve / analyze / certify / example51 pipelines. Each returns its exit
// status and the artifacts (file name -> contents) it would write.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracimp/config.hpp"

namespace fracimp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunOptions {
    std::optional<double> grid_density;
    std::optional<double> theta;
    bool json_only = false;
};

struct CommandOutput {
    int exit_code = kExitOk;
    std::map<std::string, std::string> artifacts;
    std::vector<std::string> messages;
};

CommandOutput run_solve(const ProblemConfig& config, const RunOptions& options);
CommandOutput run_analyze(const ProblemConfig& config, const RunOptions& options);
CommandOutput run_certify(const ProblemConfig& config, const RunOptions& options);
/// Built-in example end to end, with a summary of every published constant.
CommandOutput run_example51(const RunOptions& options);

/// Dispatches by name and maps errors to exit codes: configuration errors
/// to 2, numerical failures to 3. `config_text` may be empty for example51.
CommandOutput run_command(const std::string& command, const std::string& config_text, const RunOptions& options);

}  // namespace fracimp
