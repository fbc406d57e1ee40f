#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dbracket/cli/scenario.hpp"
#include "dbracket/types.hpp"

namespace dbracket::cli {

struct CheckResult {
  std::string suite;
  std::string check;
  std::optional<Vector> point;  // worst point, when the check samples points
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct SkippedSuite {
  std::string suite;
  std::string reason;
};

struct VerifyReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  std::vector<SkippedSuite> skipped;

  bool all_pass() const;
  std::size_t failures() const;
  /// ordered JSON; identical inputs give byte-identical text
  std::string to_json() const;
};

const std::vector<std::string>& suite_names();

/// Runs the named suites (all applicable ones when empty). Unknown names
/// raise ConfigError.
VerifyReport run_verify(const Scenario& scenario,
                        const std::vector<std::string>& suites = {});

}  // namespace dbracket::cli
