#include "dbracket/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "dbracket/cli/verify.hpp"
#include "dbracket/error.hpp"
#include "dbracket/numerics.hpp"

namespace dbracket::cli {

namespace {

bool is_config_code(ErrorCode c) {
  return c == ErrorCode::ConfigError || c == ErrorCode::ParseError || c == ErrorCode::IoError;
}

// Loads the scenario; config problems print and yield exit code 2.
std::optional<Scenario> load(const CommandOptions& options, std::ostream& err) {
  try {
    return resolve_scenario(options);
  } catch (const Error& e) {
    err << (is_config_code(e.code()) ? "" : "ConfigError: ") << e.what() << "\n";
    return std::nullopt;
  }
}

// Runs body with `out` redirected to --output when given.
int with_output(const CommandOptions& options, std::ostream& out,
                const std::function<void(std::ostream&)>& body) {
  if (!options.output) {
    body(out);
    return kExitOk;
  }
  std::ofstream file(*options.output);
  if (!file) {
    throw Error(ErrorCode::IoError, "cannot open output '" + *options.output + "'");
  }
  body(file);
  file.flush();
  if (!file) throw Error(ErrorCode::IoError, "failed writing '" + *options.output + "'");
  return kExitOk;
}

int runtime_failure(const Error& e, std::ostream& err) {
  err << e.what();
  if (e.index()) err << " (step index " << *e.index() << ")";
  err << "\n";
  return kExitRuntimeError;
}

std::string vector_text(const Vector& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + format_double(x);
  return s;
}

std::string matrix_header(const std::string& prefix, std::size_t d) {
  std::string s;
  for (std::size_t a = 1; a <= d; ++a)
    for (std::size_t b = 1; b <= d; ++b)
      s += "," + prefix + "_" + std::to_string(a) + (d > 9 ? "_" : "") + std::to_string(b);
  return s;
}

void append_matrix(std::string& row, const Matrix& m) {
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) row += "," + format_double(m(a, b));
}

Monotonicity observed_trend(const std::vector<double>& g, double step_tol) {
  bool up = true, down = true;
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double d = g[i] - g[i - 1];
    if (d < -step_tol) up = false;
    if (d > step_tol) down = false;
  }
  if (up && down) return Monotonicity::Constant;
  if (up) return Monotonicity::Nondecreasing;
  if (down) return Monotonicity::Nonincreasing;
  return Monotonicity::NotApplicable;
}

}  // namespace

Scenario resolve_scenario(const CommandOptions& options) {
  if (options.scenario && options.config_path) {
    throw Error(ErrorCode::ConfigError, "options: give either --config or --scenario, not both");
  }
  Scenario s;
  if (options.scenario) {
    s = builtin_scenario(*options.scenario);
  } else if (options.config_path) {
    const auto names = builtin_scenario_names();
    const bool builtin = !std::filesystem::exists(*options.config_path) &&
                         std::find(names.begin(), names.end(), *options.config_path) != names.end();
    s = builtin ? builtin_scenario(*options.config_path) : load_scenario_file(*options.config_path);
  } else {
    throw Error(ErrorCode::ConfigError, "options: --config <path> or --scenario <name> is required");
  }
  if (options.seed) s.seed = *options.seed;
  return s;
}

Trajectory run_scenario_flow(const Scenario& s) {
  if (!s.flow) throw Error(ErrorCode::ConfigError, "flow: section is missing");
  const FlowSpec& f = *s.flow;
  std::vector<Monitor> monitors;
  VectorField field;
  std::optional<ScalarFunction> G = s.G;
  switch (f.field) {
    case FlowField::Brockett:
    case FlowField::BrockettCometric: {
      const auto& alg = *s.algebra;
      const ScalarFunction h = killing_pairing(alg, *s.N);
      G = h;
      if (f.field == FlowField::Brockett) {
        field = [&alg, n = *s.N](const Vector& l) {
          return alg.bracket(l, alg.bracket(l, n));
        };
      } else {
        field = generalized_double_bracket_field(MetricField::killing(alg), lie_poisson(alg), h);
      }
      break;
    }
    case FlowField::DoubleBracket:
      field = generalized_double_bracket_field(*s.metric, *s.poisson, *s.G);
      break;
    case FlowField::Hamiltonian:
      field = hamiltonian_field(*s.poisson, *s.G);
      break;
    case FlowField::Custom:
      field = [map = *f.custom](const Vector& x) { return map.evaluate(x); };
      break;
  }
  if (G) monitors.push_back({"G", [g = *G](const Vector& x) { return g(x); }});
  if (s.poisson) {
    const auto& cs = s.poisson->casimirs();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      monitors.push_back({"C" + std::to_string(i + 1), [c = cs[i]](const Vector& x) { return c(x); }});
    }
  } else if (s.algebra && s.algebra->is_semisimple()) {
    monitors.push_back({"C1", [alg = s.algebra](const Vector& x) { return alg->killing_form(x, x); }});
  }
  return integrate(field, f.x0, f.h, f.t_end, monitors);
}

void write_leaf_metric_csv(std::ostream& out, const Scenario& s) {
  if (!s.chart) throw Error(ErrorCode::ConfigError, "chart: section is missing");
  if (!s.grid) throw Error(ErrorCode::ConfigError, "grid: section is missing");
  if (!s.metric) throw Error(ErrorCode::ConfigError, "metric: section is missing");
  if (!s.poisson) throw Error(ErrorCode::ConfigError, "poisson: section is missing");
  const std::size_t d = s.chart->leaf_dim();
  std::string header;
  for (std::size_t i = 1; i <= d; ++i) header += (i == 1 ? "u" : ",u") + std::to_string(i);
  header += matrix_header("g_ind", d) + matrix_header("omega", d) + matrix_header("tau", d);
  out << header << ",error\n";
  const std::string empty_cells(3 * d * d, ',');
  for (const Vector& u : grid_points(*s.grid)) {
    std::string row;
    for (Eigen::Index i = 0; i < u.size(); ++i) row += (i == 0 ? "" : ",") + format_double(u[i]);
    try {
      const auto r = leaf_metric_report(*s.metric, *s.poisson, *s.chart, u);
      append_matrix(row, r.g_ind);
      append_matrix(row, r.omega);
      append_matrix(row, r.tau);
      row += ",";
    } catch (const Error& e) {
      const ErrorCode c = e.code();
      if (c != ErrorCode::DegenerateInducedMetric && c != ErrorCode::NonInvertibleLeafBivector &&
          c != ErrorCode::OutsideChartDomain) {
        throw;
      }
      row += empty_cells + "," + std::string(to_string(c));
    }
    out << row << "\n";
  }
}

int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const auto s = load(options, err);
  if (!s) return kExitConfigError;
  try {
    const VerifyReport report = run_verify(*s, options.suites);
    with_output(options, out, [&](std::ostream& o) { o << report.to_json(); });
    err << "verify " << report.scenario << ": " << report.checks.size() << " checks, "
        << report.failures() << " failed, " << report.skipped.size() << " suites skipped\n";
    for (const auto& c : report.checks) {
      if (!c.pass) {
        err << "  FAIL " << c.suite << "/" << c.check << ": residual "
            << format_double(c.residual) << " > " << format_double(c.tolerance) << "\n";
      }
    }
    return report.all_pass() ? kExitOk : kExitVerificationFailed;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) {
      err << e.what() << "\n";
      return kExitConfigError;
    }
    return runtime_failure(e, err);
  }
}

int cmd_flow(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const auto s = load(options, err);
  if (!s) return kExitConfigError;
  if (!s->flow) {
    err << "ConfigError: flow: section is missing\n";
    return kExitConfigError;
  }
  try {
    const Trajectory traj = run_scenario_flow(*s);
    std::vector<std::string> channels;
    for (const auto& [name, values] : traj.channels) channels.push_back(name);
    with_output(options, out, [&](std::ostream& o) {
      write_trajectory_csv(o, traj, channels, s->flow->output_every);
    });

    std::ostream& summary = options.output ? out : err;
    summary << "scenario: " << s->name << "\n";
    summary << "steps: " << traj.size() - 1 << " (h = " << format_double(traj.step) << ")\n";
    summary << "final_time: " << format_double(traj.times.back()) << "\n";
    summary << "final_state: " << vector_text(traj.final_state()) << "\n";
    const bool brockett = s->flow->field == FlowField::Brockett ||
                          s->flow->field == FlowField::BrockettCometric;
    if (s->algebra && s->N && s->algebra->is_semisimple()) {
      const auto eq = equilibrium_report(*s->algebra, *s->N, traj, s->tolerances.get("equilibrium"),
                                         s->tolerances.get("monotone_step"));
      summary << "final_bracket_norm: " << format_double(eq.final_bracket_norm)
              << (eq.converged ? " (equilibrium)" : "") << "\n";
      summary << "ker_ad_N_dim: " << eq.ker_ad_n_dim << "\n";
      if (brockett) {
        summary << "G_expected: " << to_string(eq.direction) << "\n";
        summary << "G_monotone: "
                << (eq.g_monotone ? (*eq.g_monotone ? "yes" : "no") : "not_applicable") << "\n";
      }
    }
    for (const auto& name : channels) {
      if (name == "G") {
        summary << "G_trend: "
                << to_string(observed_trend(traj.channel("G"), s->tolerances.get("monotone_step")))
                << "\n";
      } else {
        summary << "casimir_drift " << name << ": " << format_double(channel_drift(traj, name))
                << "\n";
      }
    }
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) {
      err << e.what() << "\n";
      return kExitConfigError;
    }
    return runtime_failure(e, err);
  }
}

int cmd_leaf_metric(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const auto s = load(options, err);
  if (!s) return kExitConfigError;
  try {
    std::ostringstream buffer;
    write_leaf_metric_csv(buffer, *s);
    with_output(options, out, [&](std::ostream& o) { o << buffer.str(); });
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) {
      err << e.what() << "\n";
      return kExitConfigError;
    }
    return runtime_failure(e, err);
  }
}

}  // namespace dbracket::cli
