#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dbracket/cli/commands.hpp"
#include "dbracket/cli/scenario.hpp"
#include "dbracket/cli/verify.hpp"

namespace {

void add_common(CLI::App* cmd, dbracket::cli::CommandOptions& o, bool suites) {
  cmd->add_option("--config", o.config_path, "scenario config file (JSON, comments allowed)");
  cmd->add_option("--scenario", o.scenario, "built-in scenario name");
  cmd->add_option("--output", o.output, "output file (default: standard output)");
  cmd->add_option("--seed", o.seed, "64-bit seed for sampled points");
  if (suites) {
    cmd->add_option("--suite", o.suites, "comma-separated suites to run")->delimiter(',');
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = dbracket::cli;
  CLI::App app{"Generalized double bracket toolkit"};
  app.require_subcommand(1);

  cli::CommandOptions verify_opts, flow_opts, leaf_opts;
  auto* verify = app.add_subcommand("verify", "run verification suites, JSON report");
  add_common(verify, verify_opts, true);
  auto* flow = app.add_subcommand("flow", "integrate the scenario flow, CSV trajectory");
  add_common(flow, flow_opts, false);
  auto* leaf = app.add_subcommand("leaf-metric", "evaluate leaf metrics on the grid, CSV");
  add_common(leaf, leaf_opts, false);
  bool list = false;
  auto* scenarios = app.add_subcommand("scenarios", "list built-in scenarios and suites");
  scenarios->add_flag("--show", list, "print each built-in config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfigError;
  }

  try {
    if (*verify) return cli::cmd_verify(verify_opts, std::cout, std::cerr);
    if (*flow) return cli::cmd_flow(flow_opts, std::cout, std::cerr);
    if (*leaf) return cli::cmd_leaf_metric(leaf_opts, std::cout, std::cerr);
    for (const auto& name : cli::builtin_scenario_names()) {
      std::cout << name << "\n";
      if (list) std::cout << cli::builtin_scenario_config(name) << "\n\n";
    }
    std::cout << "suites:";
    for (const auto& s : cli::suite_names()) std::cout << " " << s;
    std::cout << "\n";
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return cli::kExitRuntimeError;
  }
  return 0;
}
