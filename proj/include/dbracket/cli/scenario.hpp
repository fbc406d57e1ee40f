#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dbracket/algebra.hpp"
#include "dbracket/cometric.hpp"
#include "dbracket/expression.hpp"
#include "dbracket/functions.hpp"
#include "dbracket/leaf.hpp"
#include "dbracket/poisson.hpp"
#include "dbracket/types.hpp"

namespace dbracket::cli {

/// Named tolerances with defaults; overridable from the config and from
/// DBRACKET_TOL_<KEY> environment variables.
class Tolerances {
 public:
  Tolerances();

  double get(const std::string& key) const;
  /// Throws ConfigError for an unknown key or a non-positive value.
  void set(const std::string& key, double value, const std::string& where);
  void apply_environment();

  const std::map<std::string, double>& values() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

enum class FlowField { Brockett, BrockettCometric, DoubleBracket, Hamiltonian, Custom };

struct FlowSpec {
  double h = 1e-2;
  double t_end = 1.0;
  Vector x0;
  FlowField field = FlowField::Brockett;
  std::optional<ExpressionMap> custom;
  std::size_t output_every = 1;
};

struct GridSpec {
  std::vector<std::pair<double, double>> ranges;
  std::vector<std::size_t> resolution;
  std::optional<double> max_radius;
};

/// Cartesian grid in index order, last coordinate fastest, masked by max_radius.
std::vector<Vector> grid_points(const GridSpec& grid);

/// A fully resolved scenario. Components are dimension-checked against each
/// other when loaded.
struct Scenario {
  std::string name;
  std::size_t dim = 0;

  std::string algebra_name;
  std::shared_ptr<const LieAlgebra> algebra;
  std::optional<MetricField> metric;
  std::optional<PoissonStructure> poisson;
  std::optional<LeafChart> chart;
  std::string chart_kind;

  std::optional<ScalarFunction> G;
  bool g_is_linear = false;
  std::optional<Vector> N;

  std::optional<FlowSpec> flow;
  std::optional<GridSpec> grid;

  Tolerances tolerances;
  std::uint64_t seed = 42;
  std::size_t points = 100;
  std::size_t orbit_points = 50;
  std::vector<std::string> suites;
};

/// Parses JSON (comments allowed). Throws ConfigError naming the offending key.
Scenario load_scenario_text(std::string_view text, std::string_view source = "config");
Scenario load_scenario_file(const std::string& path);
Scenario builtin_scenario(const std::string& name);

std::vector<std::string> builtin_scenario_names();
/// The JSON definition behind a built-in scenario.
std::string builtin_scenario_config(const std::string& name);

}  // namespace dbracket::cli
