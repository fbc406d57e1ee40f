#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dbracket/cli/commands.hpp"
#include "dbracket/cli/scenario.hpp"
#include "dbracket/cli/verify.hpp"
#include "dbracket/error.hpp"
#include "test_support.hpp"

using namespace dbracket;
using namespace dbracket::cli;
using namespace dbracket::testing;

namespace {

namespace fs = std::filesystem;

std::string config_error(const std::string& text) {
  try {
    (void)load_scenario_text(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  FAIL("expected ConfigError for " << text);
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

const CheckResult& find_check(const VerifyReport& r, const std::string& suite,
                              const std::string& check) {
  for (const auto& c : r.checks) {
    if (c.suite == suite && c.check == check) return c;
  }
  FAIL("missing check " << suite << "/" << check);
  static CheckResult none;
  return none;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

std::string run_command(int (*cmd)(const CommandOptions&, std::ostream&, std::ostream&),
                        const CommandOptions& o, int& code, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  code = cmd(o, out, err);
  if (err_text) *err_text = err.str();
  return out.str();
}

CommandOptions builtin(const std::string& name) {
  CommandOptions o;
  o.scenario = name;
  return o;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("dbracket_cli_" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_tool(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + DBRACKET_TOOL_PATH + " " + args;
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

const char* kDiverging = R"json({
  "name": "diverging",
  "dim": 1,
  "flow": {"h": 0.01, "T": 1, "x0": [0], "field": {"custom": ["exp(1000 * x1)"]}}
})json";

}  // namespace

TEST_CASE("every built-in scenario loads and verifies") {
  for (const auto& name : builtin_scenario_names()) {
    CAPTURE(name);
    const auto s = builtin_scenario(name);
    CHECK(s.name == name);
    const auto report = run_verify(s);
    for (const auto& c : report.checks) {
      CAPTURE(c.suite);
      CAPTURE(c.check);
      CHECK(c.pass);
    }
    CHECK(report.all_pass());
    CHECK(!report.checks.empty());
  }
}

TEST_CASE("sl2-hyperbolic golden checks") {
  const auto report = run_verify(builtin_scenario("sl2-hyperbolic"), {"golden_sl2"});
  CHECK(report.skipped.empty());
  const auto& origin = find_check(report, "golden_sl2", "disc_tau_origin");
  CHECK(origin.pass);
  CHECK(origin.residual <= 1e-9);
  CHECK(find_check(report, "golden_sl2", "disc_tau_grid").residual <= 1e-9);
  CHECK(find_check(report, "golden_sl2", "poisson_closed_form").residual <= 1e-12);
  CHECK(find_check(report, "golden_sl2", "cometric_closed_form").residual <= 1e-12);
  for (const auto& c : report.checks) CHECK(c.suite == "golden_sl2");
}

TEST_CASE("so3-orbit theorem4 residual") {
  const auto report = run_verify(builtin_scenario("so3-orbit"), {"theorem4"});
  const auto& c = find_check(report, "theorem4", "tau_plus_normal");
  CHECK(c.tolerance == 1e-9);
  CHECK(c.residual <= 1e-9);
  CHECK(c.pass);
  REQUIRE(c.point.has_value());
  CHECK(c.point->size() == 2);
}

TEST_CASE("cone scenario skips the leaf suites") {
  const auto report = run_verify(builtin_scenario("sl2-cone"));
  CHECK(report.all_pass());
  bool theorem3_skipped = false;
  for (const auto& s : report.skipped) {
    if (s.suite == "theorem3") {
      theorem3_skipped = true;
      CHECK(contains(s.reason, "DegenerateInducedMetric"));
    }
  }
  CHECK(theorem3_skipped);
  CHECK(find_check(report, "golden_sl2", "cone_degenerate_everywhere").residual == 0.0);
}

TEST_CASE("abelian algebra with the Lie-Poisson structure") {
  const std::string msg = config_error(R"({
    "algebra": {"builtin": "abelian", "n": 3},
    "poisson": "lie_poisson"
  })");
  CHECK(contains(msg, "ConfigError"));
  CHECK(contains(msg, "DegenerateKilling"));
  CHECK(contains(msg, "poisson"));
}

TEST_CASE("config errors name the offending key") {
  CHECK(contains(config_error(R"({"algebra": "so3", "metrik": "killing"})"), "metrik: unknown key"));
  CHECK(contains(config_error(R"({"algebra": "so7"})"), "algebra: unknown algebra"));
  CHECK(contains(config_error(R"({"algebra": "so3", "metric": {"constant": [[1, 0], [0, 1]]}})"),
                 "metric.constant"));
  CHECK(contains(config_error(R"({"algebra": "so3", "tolerances": {"theorem9": 1e-3}})"),
                 "tolerances.theorem9"));
  CHECK(contains(config_error(R"({"algebra": "so3", "tolerances": {"theorem2": -1}})"),
                 "tolerances.theorem2"));
  CHECK(contains(config_error(R"({"algebra": "so3", "G": {"expr": "x1 +"}})"), "G.expr"));
  CHECK(contains(config_error(R"({"algebra": "so3", "G": {"expr": "x4"}})"), "G.expr"));
  CHECK(contains(config_error(R"({"algebra": "so3", "chart": "hyperbolic_cone"})"),
                 "chart.builtin"));
  CHECK(contains(config_error(R"({"algebra": "so4", "chart": "hyperbolic_disc"})"), "chart"));
  CHECK(contains(config_error(R"({"algebra": "so3", "poisson": "lie_poisson",
                                  "casimirs": [{"expr": "x1"}]})"),
                 "casimirs[0]: NotCasimir"));
  CHECK(contains(config_error(R"({"algebra": "so3",
                                  "flow": {"h": 0.1, "T": 1, "x0": [1, 0, 0], "field": "brockett"}})"),
                 "flow.field"));
  CHECK(contains(config_error(R"({"algebra": "so3", "N": [0, 0, 1],
                                  "flow": {"h": 0, "T": 1, "x0": [1, 0, 0], "field": "brockett"}})"),
                 "flow.h"));
  CHECK(contains(config_error(R"({"algebra": "so3", "N": [0, 1]})"), "N"));
  CHECK(contains(config_error(R"({"algebra": {"dim": 2, "constants": [[1, 2, 3, 1]]}})"),
                 "algebra.constants[0]"));
  CHECK(contains(config_error(R"({"algebra": {"dim": 3, "constants": [[1, 2, 3, 1], [1, 3, 1, 1]]}})"),
                 "JacobiViolation"));
  CHECK(contains(config_error(R"({"algebra": "so3", "poisson": "lie_poisson",
                                  "chart": "sphere", "grid": {"ranges": [[0, 1]], "resolution": 3}})"),
                 "grid.ranges"));
  CHECK(contains(config_error(R"({"poisson": {"type": "constant", "matrix": [[0, 1], [1, 0]]}})"),
                 "AntisymmetryViolation"));
  CHECK(contains(config_error(R"({"metric": "euclidean"})"), "dim"));
  CHECK(contains(config_error("{\"algebra\": \"so3\",}"), "config"));
  CHECK(contains(config_error(R"({"algebra": "so3", "seed": -4})"), "seed"));
  CHECK_THROWS_AS(builtin_scenario("no-such-scenario"), Error);
}

TEST_CASE("inline and imported algebras") {
  const auto a = load_scenario_text(R"({
    "algebra": {"dim": 3, "constants": [[1, 2, 3, 1], [2, 3, 1, 1], [3, 1, 2, 1]]},
    "metric": "killing", "poisson": "lie_poisson"
  })");
  REQUIRE(a.algebra);
  CHECK(a.algebra->is_compact());
  CHECK(a.dim == 3);
  CHECK(max_diff(a.algebra->killing(), -2.0 * Matrix::Identity(3, 3)) <= 1e-14);

  const auto b = load_scenario_text(R"({
    "algebra": {"matrices": [[[0, 1], [0, 0]], [[0, 0], [1, 0]], [[1, 0], [0, -1]]],
                "basis_change": [[1, 0, 0], [0, 1, 0], [0, 0, 2]]}
  })");
  CHECK(b.algebra->killing()(2, 2) == doctest::Approx(32.0));

  const auto c = load_scenario_text(R"({"algebra": {"builtin": "so", "n": 5}, "metric": "killing"})");
  CHECK(c.dim == 10);
  CHECK(c.algebra_name == "so5");

  const auto d = load_scenario_text(R"({
    "poisson": {"type": "polynomial", "dim": 3,
                "entries": [{"row": 1, "col": 2, "terms": [[1, [0, 0, 1]]]},
                            {"row": 2, "col": 3, "terms": [[1, [1, 0, 0]]]},
                            {"row": 1, "col": 3, "terms": [[-1, [0, 1, 0]]]}]},
    "casimirs": [{"quadratic": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}],
    "metric": "euclidean"
  })");
  REQUIRE(d.poisson);
  CHECK(d.poisson->casimirs().size() == 1);
  const auto report = run_verify(d, {"casimir", "kernel", "hamiltonian"});
  CHECK(report.all_pass());
}

TEST_CASE("scaled Poisson structures and custom metrics") {
  const auto s = load_scenario_text(R"({
    "algebra": "sl2R_xyz",
    "poisson": {"type": "lie_poisson", "scale": 2},
    "metric": {"custom": [["1 + x1^2", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]},
    "G": {"expr": "x3"},
    "chart": "hyperbolic_disc"
  })");
  const Vector x = vec({0.3, -0.2, 0.7});
  CHECK(max_diff(s.poisson->at(x), 2.0 * lie_poisson(algebras::sl2_hyperbolic()).at(x)) <= 1e-15);
  CHECK(s.metric->positive_definite());
  const auto report = run_verify(s, {"theorem3", "remark", "kernel", "casimir"});
  for (const auto& c : report.checks) {
    CAPTURE(c.check);
    if (c.check != "linear_G_fd_jacobians") CHECK(c.pass);
  }
  CHECK(find_check(report, "kernel", "rank_D_equals_rank_Pi").pass);
}

TEST_CASE("custom charts") {
  const auto s = load_scenario_text(R"json({
    "algebra": "so3", "metric": "killing", "poisson": "lie_poisson",
    "chart": {"custom": {
      "phi": ["sin(u1) * cos(u2)", "sin(u1) * sin(u2)", "cos(u1)"],
      "F": ["atan2(sqrt(x1^2 + x2^2), x3)", "atan2(x2, x1)"],
      "sample_ranges": [[0.4, 2.7], [-2.8, 2.8]]}},
    "G": {"killing_linear": [0.2, -0.1, 1]}
  })json");
  CHECK(s.chart_kind == "custom");
  const auto report = run_verify(s);
  for (const auto& c : report.checks) {
    CAPTURE(c.check);
    CHECK(c.pass);
  }
  CHECK(find_check(report, "theorem4", "tau_plus_normal").residual <= 1e-8);
}

TEST_CASE("verify reports are deterministic and record the seed") {
  const auto s = builtin_scenario("so4-orbit");
  const std::string a = run_verify(s).to_json();
  const std::string b = run_verify(s).to_json();
  CHECK(a == b);
  CHECK(contains(a, "\"seed\": 42"));
  CommandOptions o = builtin("so4-orbit");
  o.seed = 7;
  int code = -1;
  const std::string c = run_command(cmd_verify, o, code);
  CHECK(code == kExitOk);
  CHECK(contains(c, "\"seed\": 7"));
  CHECK(c != a);
  CHECK(run_command(cmd_verify, o, code) == c);
}

TEST_CASE("suite selection") {
  const auto s = builtin_scenario("so3-orbit");
  const auto r = run_verify(s, {"remark", "kernel"});
  for (const auto& c : r.checks) CHECK((c.suite == "remark" || c.suite == "kernel"));
  try {
    (void)run_verify(s, {"theorem5"});
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(contains(e.what(), "theorem5"));
  }
  CommandOptions o = builtin("so3-orbit");
  o.suites = {"theorem5"};
  int code = -1;
  (void)run_command(cmd_verify, o, code);
  CHECK(code == kExitConfigError);
}

TEST_CASE("tolerances from the environment") {
  ::setenv("DBRACKET_TOL_THEOREM2", "1e-30", 1);
  const auto strict = builtin_scenario("so3-orbit");
  ::unsetenv("DBRACKET_TOL_THEOREM2");
  CHECK(strict.tolerances.get("theorem2") == 1e-30);
  const auto report = run_verify(strict, {"theorem2"});
  CHECK(!report.all_pass());

  CommandOptions o = builtin("so3-orbit");
  int code = -1;
  ::setenv("DBRACKET_TOL_THEOREM2", "1e-30", 1);
  (void)run_command(cmd_verify, o, code);
  CHECK(code == kExitVerificationFailed);
  ::setenv("DBRACKET_TOL_THEOREM2", "tight", 1);
  std::string err;
  (void)run_command(cmd_verify, o, code, &err);
  ::unsetenv("DBRACKET_TOL_THEOREM2");
  CHECK(code == kExitConfigError);
  CHECK(contains(err, "DBRACKET_TOL_THEOREM2"));
  CHECK(builtin_scenario("so3-orbit").tolerances.get("theorem2") == 1e-12);
}

TEST_CASE("verify report layout") {
  const auto report = run_verify(builtin_scenario("so3-orbit"), {"theorem2"});
  const std::string json = report.to_json();
  for (const char* key : {"\"scenario\"", "\"entries\"", "\"suite\"", "\"check\"", "\"point\"",
                          "\"residual\"", "\"tolerance\"", "\"pass\"", "\"summary\""}) {
    CHECK(contains(json, key));
  }
  CHECK(json.find("\"scenario\"") < json.find("\"entries\""));
  CHECK(json.find("\"entries\"") < json.find("\"summary\""));
}

TEST_CASE("so3-brockett flow CSV") {
  int code = -1;
  std::string err;
  const std::string csv = run_command(cmd_flow, builtin("so3-brockett"), code, &err);
  REQUIRE(code == kExitOk);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() > 2);
  CHECK(rows[0] == std::vector<std::string>{"t", "x1", "x2", "x3", "G", "C1"});
  CHECK(std::stod(rows.back()[0]) == 50.0);
  const std::size_t g = column(rows[0], "G"), c = column(rows[0], "C1");
  const double c0 = std::stod(rows[1][c]);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][g]) >= std::stod(rows[i - 1][g]) - 1e-10);
    CHECK(std::abs(std::stod(rows[i][c]) - c0) <= 1e-8);
  }
  CHECK(contains(err, "final_state"));
  CHECK(contains(err, "final_bracket_norm"));
  CHECK(contains(err, "casimir_drift C1"));
  CHECK(contains(err, "G_monotone: yes"));

  const auto traj = run_scenario_flow(builtin_scenario("so3-brockett"));
  CHECK(traj.size() == 5001);
  CHECK(std::abs(traj.final_state()[2] + 1.0) <= 1e-6);
}

TEST_CASE("flow with T = 0 writes the initial state") {
  int code = -1;
  TempDir tmp;
  CommandOptions o;
  o.config_path = tmp.write("t0.json", R"({
    "algebra": "so3",
    "N": [0, 0, 1],
    "flow": {"h": 0.01, "T": 0, "x0": [0.25, 0.5, -1.5], "field": "brockett"}
  })");
  const auto rows = parse_csv(run_command(cmd_flow, o, code));
  CHECK(code == kExitOk);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == std::vector<std::string>{"0", "0.25", "0.5", "-1.5", "3", "-5.125"});
}

TEST_CASE("diverging flow reports the step") {
  TempDir tmp;
  CommandOptions o;
  o.config_path = tmp.write("diverging.json", kDiverging);
  int code = -1;
  std::string err;
  (void)run_command(cmd_flow, o, code, &err);
  CHECK(code == kExitRuntimeError);
  CHECK(contains(err, "NonFiniteState"));
  CHECK(contains(err, "step index 1"));
}

TEST_CASE("flow output file and summary") {
  TempDir tmp;
  CommandOptions o = builtin("canonical-r2n");
  o.output = tmp.file("osc.csv");
  int code = -1;
  const std::string summary = run_command(cmd_flow, o, code);
  CHECK(code == kExitOk);
  CHECK(contains(summary, "G_trend: constant"));
  const auto rows = parse_csv(slurp(*o.output));
  REQUIRE(rows.size() > 2);
  CHECK(rows[0].size() == 6);
  CHECK(std::abs(std::stod(rows.back()[1]) - 1.0) <= 1e-9);
  CHECK(std::abs(std::stod(rows.back()[4]) - 1.0) <= 1e-9);

  o.output = tmp.file("missing_dir/osc.csv");
  (void)run_command(cmd_flow, o, code);
  CHECK(code == kExitRuntimeError);
  CommandOptions no_flow = builtin("sl2-cone");
  (void)run_command(cmd_flow, no_flow, code);
  CHECK(code == kExitConfigError);
}

TEST_CASE("leaf-metric on the hyperbolic disc") {
  int code = -1;
  const auto rows = parse_csv(run_command(cmd_leaf_metric, builtin("sl2-hyperbolic"), code));
  REQUIRE(code == kExitOk);
  const auto& h = rows[0];
  CHECK(h.front() == "u1");
  CHECK(h.back() == "error");
  CHECK(h.size() == 2 + 3 * 4 + 1);
  std::size_t expected = 0;
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) {
      const double a = -0.9 + 0.09 * i, b = -0.9 + 0.09 * j;
      expected += a * a + b * b <= 0.81 + 1e-9;
    }
  CHECK(rows.size() == expected + 1);
  const std::size_t t11 = column(h, "tau_11"), t12 = column(h, "tau_12"),
                    t21 = column(h, "tau_21"), t22 = column(h, "tau_22");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double u = std::stod(rows[i][0]), v = std::stod(rows[i][1]);
    const double r2 = u * u + v * v;
    const double want = 8.0 / ((1 - r2) * (1 - r2));
    CHECK(std::abs(std::stod(rows[i][t11]) - want) <= 1e-9);
    CHECK(std::abs(std::stod(rows[i][t22]) - want) <= 1e-9);
    CHECK(std::abs(std::stod(rows[i][t12])) <= 1e-9);
    CHECK(std::abs(std::stod(rows[i][t21])) <= 1e-9);
    CHECK(rows[i].back().empty());
  }
}

TEST_CASE("leaf-metric on the light cone tags every row") {
  int code = -1;
  const auto rows = parse_csv(run_command(cmd_leaf_metric, builtin("sl2-cone"), code));
  CHECK(code == kExitOk);
  REQUIRE(rows.size() == 1 + 13 * 10);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].back() == "DegenerateInducedMetric");
    CHECK(rows[i][2].empty());
    CHECK(rows[i].size() == rows[0].size());
  }
}

TEST_CASE("leaf-metric on the one-sheeted hyperboloid") {
  int code = -1;
  const auto rows = parse_csv(run_command(cmd_leaf_metric, builtin("sl2-onesheet"), code));
  CHECK(code == kExitOk);
  REQUIRE(rows.size() == 101);
  const std::size_t t11 = column(rows[0], "tau_11"), t22 = column(rows[0], "tau_22");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double ch = std::cosh(std::stod(rows[i][1]));
    CHECK(std::abs(std::stod(rows[i][t11]) + 2 * ch * ch) <= 1e-9);
    CHECK(std::abs(std::stod(rows[i][t22]) - 2) <= 1e-9);
  }
}

TEST_CASE("leaf-metric needs chart and grid") {
  int code = -1;
  std::string err;
  (void)run_command(cmd_leaf_metric, builtin("so3-brockett"), code, &err);
  CHECK(code == kExitConfigError);
  CHECK(contains(err, "grid"));
}

TEST_CASE("grid points") {
  GridSpec g;
  g.ranges = {{0, 1}, {-1, 1}};
  g.resolution = {2, 3};
  const auto pts = grid_points(g);
  REQUIRE(pts.size() == 6);
  CHECK(max_diff(pts[0], vec({0, -1})) == 0.0);
  CHECK(max_diff(pts[1], vec({0, 0})) == 0.0);
  CHECK(max_diff(pts[5], vec({1, 1})) == 0.0);
  g.max_radius = 1.0;
  CHECK(grid_points(g).size() == 4);
}

TEST_CASE("shipped example config") {
  const auto s = load_scenario_file(std::string(DBRACKET_CONFIG_DIR) + "/example.json");
  CHECK(s.name == "so3-custom-example");
  CHECK(s.tolerances.get("theorem4") == 1e-9);
  REQUIRE(s.flow);
  CHECK(run_verify(s).all_pass());
  const auto traj = run_scenario_flow(s);
  CHECK(std::abs(traj.final_state().norm() - 2.0) <= 1e-8);
}

TEST_CASE("command-line tool exit codes") {
  TempDir tmp;
  const std::string quiet = " >" + tmp.file("out.txt") + " 2>" + tmp.file("err.txt");
  CHECK(run_tool("verify --scenario so3-orbit" + quiet) == 0);
  CHECK(run_tool("verify --config so3-orbit" + quiet) == 0);
  CHECK(run_tool("verify --config " + tmp.file("missing.json") + quiet) == 2);
  const std::string bad = tmp.write("bad.json", R"({"algebra": {"builtin": "abelian", "n": 2},
                                                   "poisson": "lie_poisson"})");
  CHECK(run_tool("verify --config " + bad + quiet) == 2);
  CHECK(contains(slurp(tmp.file("err.txt")), "DegenerateKilling"));
  CHECK(run_tool("verify --scenario sl2-hyperbolic" + quiet, "DBRACKET_TOL_REMARK=1e-40") == 1);
  CHECK(run_tool("verify --scenario sl2-hyperbolic --suite remark,theorem2" + quiet) == 0);
  CHECK(run_tool("verify --scenario sl2-hyperbolic --suite nope" + quiet) == 2);
  CHECK(run_tool("flow --config " + tmp.write("div.json", kDiverging) + quiet) == 3);
  CHECK(run_tool("bogus" + quiet) == 2);

  const std::string a = tmp.file("a.json"), b = tmp.file("b.json");
  CHECK(run_tool("verify --scenario so4-orbit --output " + a + quiet) == 0);
  CHECK(run_tool("verify --scenario so4-orbit --output " + b + quiet) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(run_tool("flow --scenario so3-brockett --output " + a + quiet) == 0);
  CHECK(run_tool("flow --scenario so3-brockett --output " + b + quiet) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(run_tool("leaf-metric --scenario sl2-onesheet --output " + a + quiet) == 0);
  CHECK(slurp(a).rfind("u1,u2,g_ind_11", 0) == 0);
}
