#pragma once

#include <iosfwd>
#include <string>

#include "cli/config.hpp"

namespace dqlin::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalFailure = 2, kInvariantFailure = 3 };

/// Everything a subcommand needs besides the config.
struct CommandContext {
  std::ostream* out;  // tables and reports
  std::ostream* err;  // diagnostics
};

int cmd_simulate(const RunConfig& c, const CommandContext& ctx);
int cmd_verify(const RunConfig& c, const CommandContext& ctx);
int cmd_spectrum(const RunConfig& c, const CommandContext& ctx);
int cmd_models(const RunConfig& c, const CommandContext& ctx);
int cmd_action_data(const RunConfig& c, const CommandContext& ctx);
int cmd_wigner_grid(const RunConfig& c, const CommandContext& ctx);

/// Runs `name` and maps exceptions onto the exit-code contract.
int run_command(const std::string& name, const RunConfig& c, const CommandContext& ctx);

}  // namespace dqlin::cli
