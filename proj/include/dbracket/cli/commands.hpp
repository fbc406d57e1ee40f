#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dbracket/cli/scenario.hpp"
#include "dbracket/flow.hpp"

namespace dbracket::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitConfigError = 2,
  kExitRuntimeError = 3,
};

struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> scenario;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> suites;
};

/// Loads the scenario named by --config or --scenario and applies --seed.
Scenario resolve_scenario(const CommandOptions& options);

/// Trajectory of the scenario's flow section, with "G" and Casimir monitors.
Trajectory run_scenario_flow(const Scenario& scenario);

void write_leaf_metric_csv(std::ostream& out, const Scenario& scenario);

/// Command entry points: report to `out`, diagnostics to `err`, return the
/// process exit code. Library errors are mapped to exit codes here.
int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_flow(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_leaf_metric(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace dbracket::cli
