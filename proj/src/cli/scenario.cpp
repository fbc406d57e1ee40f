#include "dbracket/cli/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dbracket/charts.hpp"
#include "dbracket/error.hpp"
#include "dbracket/polynomial.hpp"

namespace dbracket::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::ConfigError, path + ": " + msg);
}

// JSON value together with its key path, for error messages.
class Node {
 public:
  Node(const json& value, std::string path) : value_(&value), path_(std::move(path)) {}

  const json& raw() const { return *value_; }
  const std::string& path() const { return path_; }

  bool is_string() const { return value_->is_string(); }
  bool is_object() const { return value_->is_object(); }
  bool has(const std::string& key) const {
    return value_->is_object() && value_->contains(key);
  }

  Node at(const std::string& key) const {
    if (!has(key)) config_error(path_, "missing key '" + key + "'");
    return {(*value_)[key], child(key)};
  }
  std::optional<Node> find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return Node((*value_)[key], child(key));
  }
  Node operator[](std::size_t i) const {
    return {(*value_)[i], path_ + "[" + std::to_string(i) + "]"};
  }
  std::size_t size() const { return value_->size(); }

  void only_keys(std::initializer_list<const char*> allowed) const {
    if (!value_->is_object()) config_error(path_, "expected an object");
    for (const auto& item : value_->items()) {
      if (std::none_of(allowed.begin(), allowed.end(),
                       [&](const char* k) { return item.key() == k; })) {
        config_error(child(item.key()), "unknown key");
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { config_error(path_, msg); }

  std::string as_string() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
  }
  double as_double() const {
    if (!value_->is_number()) fail("expected a number");
    const double v = value_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  double as_positive() const {
    const double v = as_double();
    if (!(v > 0.0)) fail("expected a positive number");
    return v;
  }
  std::size_t as_size(std::size_t min_value = 0) const {
    if (!value_->is_number_integer() || value_->get<long long>() < 0) {
      fail("expected a nonnegative integer");
    }
    const auto v = value_->get<std::size_t>();
    if (v < min_value) fail("expected an integer >= " + std::to_string(min_value));
    return v;
  }
  std::uint64_t as_u64() const {
    if (!value_->is_number_unsigned() && !(value_->is_number_integer() &&
                                           value_->get<long long>() >= 0)) {
      fail("expected an unsigned 64-bit integer");
    }
    return value_->get<std::uint64_t>();
  }
  void require_array() const {
    if (!value_->is_array()) fail("expected an array");
  }
  Vector as_vector(std::optional<std::size_t> n = std::nullopt) const {
    require_array();
    if (n && size() != *n) {
      fail("expected " + std::to_string(*n) + " entries, got " + std::to_string(size()));
    }
    Vector v(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) v[static_cast<Eigen::Index>(i)] = (*this)[i].as_double();
    return v;
  }
  Matrix as_matrix(std::optional<std::size_t> n = std::nullopt) const {
    require_array();
    if (size() == 0) fail("expected a nonempty matrix");
    const std::size_t cols = (*this)[0].size();
    if (n && (size() != *n || cols != *n)) {
      fail("expected a " + std::to_string(*n) + "x" + std::to_string(*n) + " matrix");
    }
    Matrix m(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < size(); ++i) {
      const Vector row = (*this)[i].as_vector(cols);
      m.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return m;
  }
  std::vector<std::string> as_strings(std::optional<std::size_t> n = std::nullopt) const {
    require_array();
    if (n && size() != *n) fail("expected " + std::to_string(*n) + " entries");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].as_string());
    return out;
  }

 private:
  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* value_;
  std::string path_;
};

// Runs fn and rewraps library errors as ConfigError at the given path.
template <class Fn>
auto at_path(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(path, e.what());
  }
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults{
      {"golden", 1e-12},          {"golden_metric", 1e-9},
      {"hamiltonian", 1e-11},     {"casimir", 1e-10},
      {"casimir_drift", 1e-8},    {"theorem1", 1e-8},
      {"theorem2", 1e-12},        {"theorem3", 1e-8},
      {"theorem4", 1e-8},         {"remark", 1e-9},
      {"tau_symmetry", 1e-12},    {"chart_roundtrip", 1e-10},
      {"chart_jacobian", 1e-12},  {"chart_jacobian_fd", 1e-8},
      {"chart_casimir", 1e-9},    {"rank", 1e-10},
      {"equilibrium", 1e-6},      {"monotone_step", 1e-10},
  };
  return defaults;
}

Polynomial parse_polynomial(const Node& node, std::size_t dim) {
  node.require_array();
  std::vector<Monomial> terms;
  for (std::size_t t = 0; t < node.size(); ++t) {
    const Node term = node[t];
    term.require_array();
    if (term.size() != 2) term.fail("expected [coefficient, [exponents...]]");
    Monomial m;
    m.coefficient = term[0].as_double();
    const Node powers = term[1];
    powers.require_array();
    if (powers.size() != dim) {
      powers.fail("expected " + std::to_string(dim) + " exponents");
    }
    for (std::size_t i = 0; i < dim; ++i) {
      m.powers.push_back(static_cast<int>(powers[i].as_size()));
    }
    terms.push_back(std::move(m));
  }
  return Polynomial(dim, std::move(terms));
}

struct FunctionSpec {
  ScalarFunction fn;
  bool linear = false;
  std::optional<Vector> killing_n;
};

FunctionSpec parse_function(const Node& node, std::size_t dim,
                            const LieAlgebra* alg) {
  if (node.is_string()) node.fail("expected an object such as {\"expr\": \"...\"}");
  node.only_keys({"linear", "killing_linear", "quadratic", "polynomial", "expr"});
  if (node.raw().size() != 1) node.fail("expected exactly one function kind");
  if (auto v = node.find("linear")) {
    return {ScalarFunction::linear(v->as_vector(dim)).renamed("linear"), true, {}};
  }
  if (auto v = node.find("killing_linear")) {
    if (alg == nullptr) v->fail("needs an algebra");
    const Vector n = v->as_vector(dim);
    return {killing_pairing(*alg, n), true, n};
  }
  if (auto v = node.find("quadratic")) {
    const Matrix a = v->as_matrix(dim);
    return {ScalarFunction::quadratic(a).renamed("quadratic"), false, {}};
  }
  if (auto v = node.find("polynomial")) {
    const Polynomial p = at_path(v->path(), [&] { return parse_polynomial(*v, dim); });
    return {p.as_function(), false, {}};
  }
  const Node e = node.at("expr");
  const auto names = indexed_names("x", dim);
  const Expression expr = at_path(e.path(), [&] {
    return Expression::parse(e.as_string(), names);
  });
  return {expr.as_function(), false, {}};
}

std::shared_ptr<const LieAlgebra> parse_algebra(const Node& node, std::string& name,
                                                const std::filesystem::path& base_dir) {
  auto make = [](LieAlgebra a) { return std::make_shared<const LieAlgebra>(std::move(a)); };
  if (node.is_string()) {
    name = node.as_string();
    if (name == "sl2R_e") return make(algebras::sl2_standard());
    if (name == "sl2R_xyz") return make(algebras::sl2_hyperbolic());
    if (name == "so3") return make(algebras::so3());
    if (name == "so4") return make(algebras::so(4));
    node.fail("unknown algebra '" + name + "' (sl2R_e, sl2R_xyz, so3, so4, or an object)");
  }
  node.only_keys({"builtin", "n", "constants", "dim", "file", "matrices", "basis_change"});
  std::shared_ptr<const LieAlgebra> alg;
  if (auto b = node.find("builtin")) {
    name = b->as_string();
    const std::size_t n = node.at("n").as_size(1);
    if (name == "so") {
      if (n < 2) node.at("n").fail("so(n) needs n >= 2");
      alg = at_path(node.path(), [&] { return make(algebras::so(n)); });
      name = "so" + std::to_string(n);
    } else if (name == "abelian") {
      alg = make(algebras::abelian(n));
      name = "abelian" + std::to_string(n);
    } else {
      b->fail("unknown builtin family '" + name + "' (so, abelian)");
    }
  } else if (auto c = node.find("constants")) {
    const std::size_t n = node.at("dim").as_size(1);
    c->require_array();
    std::vector<double> constants(n * n * n, 0.0);
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> given;
    for (std::size_t t = 0; t < c->size(); ++t) {
      const Node e = (*c)[t];
      e.require_array();
      if (e.size() != 4) e.fail("expected [i, j, k, value] with 1-based indices");
      const std::size_t i = e[0].as_size(1), j = e[1].as_size(1), k = e[2].as_size(1);
      if (i > n || j > n || k > n) e.fail("index out of range");
      constants[((k - 1) * n + (i - 1)) * n + (j - 1)] = e[3].as_double();
      given.insert({i - 1, j - 1, k - 1});
    }
    for (const auto& [i, j, k] : given) {
      if (!given.contains({j, i, k})) {
        constants[(k * n + j) * n + i] = -constants[(k * n + i) * n + j];
      }
    }
    alg = at_path(c->path(), [&] { return make(build_algebra(n, constants)); });
    name = "custom";
  } else if (auto f = node.find("file")) {
    std::filesystem::path p = f->as_string();
    if (p.is_relative()) p = base_dir / p;
    std::ifstream in(p);
    if (!in) f->fail("cannot open '" + p.string() + "'");
    alg = at_path(f->path(), [&] { return make(read_structure_constants(in)); });
    name = "custom";
  } else if (auto m = node.find("matrices")) {
    m->require_array();
    std::vector<Matrix> basis;
    for (std::size_t i = 0; i < m->size(); ++i) basis.push_back((*m)[i].as_matrix());
    alg = at_path(m->path(), [&] { return make(matrix_basis_import(basis)); });
    name = "custom";
  } else {
    node.fail("expected one of builtin, constants, file, matrices");
  }
  if (auto p = node.find("basis_change")) {
    const Matrix pm = p->as_matrix(alg->dim());
    alg = at_path(p->path(), [&] { return make(change_basis(*alg, pm)); });
  }
  return alg;
}

PoissonStructure parse_poisson(const Node& node, std::size_t& dim,
                               const LieAlgebra* alg) {
  std::string type;
  std::optional<Node> obj;
  if (node.is_string()) {
    type = node.as_string();
  } else {
    node.only_keys({"type", "scale", "n", "matrix", "dim", "entries"});
    type = node.at("type").as_string();
    obj = node;
  }
  auto base = [&]() -> PoissonStructure {
    if (type == "lie_poisson") {
      if (alg == nullptr) node.fail("lie_poisson needs an algebra");
      return at_path(node.path(), [&] { return lie_poisson(*alg); });
    }
    if (!obj) node.fail("'" + type + "' needs an object with parameters");
    if (type == "canonical") {
      return canonical_poisson(obj->at("n").as_size(1));
    }
    if (type == "constant") {
      const Matrix m = obj->at("matrix").as_matrix();
      if (m.rows() != m.cols()) obj->at("matrix").fail("expected a square matrix");
      return at_path(obj->at("matrix").path(), [&] { return constant_poisson(m); });
    }
    if (type == "polynomial") {
      const std::size_t n = obj->at("dim").as_size(2);
      const Node entries = obj->at("entries");
      entries.require_array();
      std::vector<BivectorEntry> upper;
      for (std::size_t t = 0; t < entries.size(); ++t) {
        const Node e = entries[t];
        e.only_keys({"row", "col", "terms"});
        const std::size_t r = e.at("row").as_size(1), c = e.at("col").as_size(1);
        if (r > n || c > n || r >= c) e.fail("need 1 <= row < col <= dim");
        const Polynomial poly =
            at_path(e.at("terms").path(), [&] { return parse_polynomial(e.at("terms"), n); });
        upper.push_back({r - 1, c - 1, poly});
      }
      return at_path(entries.path(), [&] { return polynomial_poisson(n, std::move(upper)); });
    }
    node.fail("unknown poisson type '" + type +
              "' (lie_poisson, canonical, constant, polynomial)");
  };
  PoissonStructure p = base();
  if (obj) {
    if (auto s = obj->find("scale")) {
      const double f = s->as_double();
      if (f == 0.0) s->fail("scale must be nonzero");
      p = p.scaled(f);
    }
  }
  if (dim != 0 && p.dim() != dim) {
    node.fail("dimension " + std::to_string(p.dim()) + " does not match " +
              std::to_string(dim));
  }
  dim = p.dim();
  return p;
}

MetricField parse_metric(const Node& node, std::size_t dim, const LieAlgebra* alg) {
  if (node.is_string()) {
    const std::string s = node.as_string();
    if (s == "killing") {
      if (alg == nullptr) node.fail("killing metric needs an algebra");
      return at_path(node.path(), [&] { return MetricField::killing(*alg); });
    }
    if (s == "euclidean") return MetricField::euclidean(dim);
    node.fail("unknown metric '" + s + "' (killing, euclidean, or an object)");
  }
  node.only_keys({"constant", "custom", "reference"});
  if (auto c = node.find("constant")) {
    const Matrix g = c->as_matrix(dim);
    return at_path(c->path(), [&] { return MetricField::constant(g); });
  }
  const Node c = node.at("custom");
  c.require_array();
  if (c.size() != dim) c.fail("expected " + std::to_string(dim) + " rows");
  const auto names = indexed_names("x", dim);
  std::vector<ExpressionMap> rows;
  for (std::size_t i = 0; i < dim; ++i) {
    const auto entries = c[i].as_strings(dim);
    rows.push_back(at_path(c[i].path(), [&] { return ExpressionMap::parse(entries, names); }));
  }
  const Vector ref = node.has("reference") ? node.at("reference").as_vector(dim)
                                           : Vector(Vector::Zero(static_cast<Eigen::Index>(dim)));
  auto field = [rows](const Vector& x) {
    Matrix g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) g.row(static_cast<Eigen::Index>(i)) = rows[i].evaluate(x).transpose();
    return g;
  };
  return at_path(c.path(), [&] { return MetricField::custom(dim, field, ref); });
}

LeafChart parse_chart(const Node& node, std::size_t dim, const PoissonStructure* poisson,
                      std::string& kind) {
  if (node.is_string()) {
    json wrapped = {{"builtin", node.as_string()}};
    return parse_chart(Node(wrapped, node.path()), dim, poisson, kind);
  }
  node.only_keys({"builtin", "c", "l", "radius", "n", "level_set", "custom"});
  const auto expect_dim = [&](std::size_t n) {
    if (dim != n) node.fail("chart lives in R^" + std::to_string(n) + " but the scenario is R^" + std::to_string(dim));
  };
  if (auto b = node.find("builtin")) {
    kind = b->as_string();
    if (kind == "hyperbolic_disc") { expect_dim(3); return charts::hyperbolic_disc(); }
    if (kind == "two_sheet") {
      expect_dim(3);
      return charts::two_sheet_hyperboloid(node.has("c") ? node.at("c").as_positive() : 1.0);
    }
    if (kind == "one_sheet") {
      expect_dim(3);
      return charts::one_sheet_hyperboloid(node.has("l") ? node.at("l").as_positive() : 1.0);
    }
    if (kind == "light_cone") { expect_dim(3); return charts::light_cone(); }
    if (kind == "sphere") {
      expect_dim(3);
      return charts::sphere(node.has("radius") ? node.at("radius").as_positive() : 1.0);
    }
    if (kind == "canonical") {
      const std::size_t n = node.has("n") ? node.at("n").as_size(1) : dim / 2;
      expect_dim(2 * n);
      return charts::canonical(n);
    }
    b->fail("unknown chart '" + kind +
            "' (hyperbolic_disc, two_sheet, one_sheet, light_cone, sphere, canonical)");
  }
  if (auto ls = node.find("level_set")) {
    kind = "level_set";
    ls->only_keys({"base", "radius"});
    if (poisson == nullptr || poisson->casimirs().empty()) {
      ls->fail("level_set needs a poisson structure with registered Casimirs");
    }
    const Vector base = ls->at("base").as_vector(dim);
    const double radius = ls->at("radius").as_positive();
    return at_path(ls->path(), [&] {
      return charts::level_set(poisson->casimirs(), base, radius);
    });
  }
  const Node c = node.at("custom");
  kind = "custom";
  c.only_keys({"phi", "F", "sample_ranges", "domain_ranges"});
  const Node ranges = c.at("sample_ranges");
  ranges.require_array();
  const std::size_t d = ranges.size();
  if (d == 0 || d % 2 != 0) ranges.fail("leaf dimension must be even and positive");
  const auto parse_ranges = [](const Node& r) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const Vector ab = r[i].as_vector(2);
      if (!(ab[0] < ab[1])) r[i].fail("expected [low, high] with low < high");
      out.emplace_back(ab[0], ab[1]);
    }
    return out;
  };
  const auto sample = parse_ranges(ranges);
  std::optional<std::vector<std::pair<double, double>>> domain;
  if (auto dr = c.find("domain_ranges")) {
    dr->require_array();
    if (dr->size() != d) dr->fail("expected one range per leaf coordinate");
    domain = parse_ranges(*dr);
  }
  const auto u_names = indexed_names("u", d);
  const auto x_names = indexed_names("x", dim);
  const auto phi_src = c.at("phi").as_strings(dim);
  const auto f_src = c.at("F").as_strings(d);
  const auto phi = at_path(c.at("phi").path(), [&] { return ExpressionMap::parse(phi_src, u_names); });
  const auto F = at_path(c.at("F").path(), [&] { return ExpressionMap::parse(f_src, x_names); });
  LeafChart::Definition def;
  def.name = "custom";
  def.ambient_dim = dim;
  def.leaf_dim = d;
  def.phi = [phi](const Vector& u) { return phi.evaluate(u); };
  def.coordinates = [F](const Vector& x) { return F.evaluate(x); };
  def.jac_phi = [phi](const Vector& u) { return phi.jacobian(u); };
  def.jac_coordinates = [F](const Vector& x) { return F.jacobian(x); };
  if (domain) {
    def.domain = [dom = *domain](const Vector& u) {
      for (std::size_t i = 0; i < dom.size(); ++i) {
        const double v = u[static_cast<Eigen::Index>(i)];
        if (!(v > dom[i].first && v < dom[i].second)) return false;
      }
      return true;
    };
  }
  def.sampler = [sample](std::mt19937_64& rng) {
    Vector u(static_cast<Eigen::Index>(sample.size()));
    for (std::size_t i = 0; i < sample.size(); ++i) {
      std::uniform_real_distribution<double> dist(sample[i].first, sample[i].second);
      u[static_cast<Eigen::Index>(i)] = dist(rng);
    }
    return u;
  };
  return at_path(c.path(), [&] { return LeafChart(std::move(def)); });
}

FlowSpec parse_flow(const Node& node, Scenario& s) {
  node.only_keys({"h", "T", "x0", "N", "field", "output_every"});
  FlowSpec f;
  f.h = node.at("h").as_positive();
  f.t_end = node.at("T").as_double();
  if (f.t_end < 0.0) node.at("T").fail("expected T >= 0");
  f.x0 = node.at("x0").as_vector(s.dim);
  if (auto n = node.find("N")) s.N = n->as_vector(s.dim);
  if (auto e = node.find("output_every")) f.output_every = e->as_size(1);
  const Node field = node.at("field");
  if (field.is_string()) {
    const std::string name = field.as_string();
    if (name == "brockett") f.field = FlowField::Brockett;
    else if (name == "brockett_cometric") f.field = FlowField::BrockettCometric;
    else if (name == "v_G") f.field = FlowField::DoubleBracket;
    else if (name == "hamiltonian") f.field = FlowField::Hamiltonian;
    else field.fail("unknown field '" + name + "' (brockett, brockett_cometric, v_G, hamiltonian, or {\"custom\": [...]})");
  } else {
    field.only_keys({"custom"});
    const auto src = field.at("custom").as_strings(s.dim);
    const auto names = indexed_names("x", s.dim);
    f.custom = at_path(field.at("custom").path(), [&] { return ExpressionMap::parse(src, names); });
    f.field = FlowField::Custom;
  }
  switch (f.field) {
    case FlowField::Brockett:
    case FlowField::BrockettCometric:
      if (!s.algebra) field.fail("Brockett flows need an algebra");
      at_path(field.path(), [&] { (void)s.algebra->killing_inverse(); });
      if (!s.N) field.fail("Brockett flows need N (flow.N, top-level N, or G.killing_linear)");
      break;
    case FlowField::DoubleBracket:
      if (!s.metric || !s.poisson || !s.G) field.fail("v_G needs metric, poisson and G");
      break;
    case FlowField::Hamiltonian:
      if (!s.poisson || !s.G) field.fail("hamiltonian flow needs poisson and G");
      break;
    case FlowField::Custom:
      break;
  }
  return f;
}

GridSpec parse_grid(const Node& node, const Scenario& s) {
  node.only_keys({"ranges", "resolution", "max_radius"});
  GridSpec g;
  const Node ranges = node.at("ranges");
  ranges.require_array();
  if (s.chart && ranges.size() != s.chart->leaf_dim()) {
    ranges.fail("expected " + std::to_string(s.chart->leaf_dim()) + " ranges, one per leaf coordinate");
  }
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const Vector ab = ranges[i].as_vector(2);
    if (ab[0] > ab[1]) ranges[i].fail("expected [low, high] with low <= high");
    g.ranges.emplace_back(ab[0], ab[1]);
  }
  const Node res = node.at("resolution");
  if (res.raw().is_array()) {
    if (res.size() != ranges.size()) res.fail("expected one resolution per range");
    for (std::size_t i = 0; i < res.size(); ++i) g.resolution.push_back(res[i].as_size(1));
  } else {
    g.resolution.assign(ranges.size(), res.as_size(1));
  }
  if (auto r = node.find("max_radius")) g.max_radius = r->as_positive();
  return g;
}

std::vector<Vector> casimir_sample_points(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<Vector> pts;
  for (int i = 0; i < 32; ++i) {
    Vector x(static_cast<Eigen::Index>(dim));
    for (auto& v : x) v = dist(rng);
    pts.push_back(x);
  }
  return pts;
}

Scenario build(const json& root, const std::filesystem::path& base_dir) {
  const Node top(root, "");
  if (!root.is_object()) throw Error(ErrorCode::ConfigError, "config: expected a JSON object");
  top.only_keys({"name", "description", "dim", "algebra", "metric", "poisson", "casimirs",
                 "chart", "G", "N", "flow", "grid", "tolerances", "seed", "points",
                 "orbit_points", "suites"});
  Scenario s;
  s.name = top.has("name") ? top.at("name").as_string() : "custom";
  if (auto d = top.find("dim")) s.dim = d->as_size(1);

  if (auto a = top.find("algebra")) {
    s.algebra = parse_algebra(*a, s.algebra_name, base_dir);
    if (s.dim != 0 && s.dim != s.algebra->dim()) a->fail("algebra dimension does not match dim");
    s.dim = s.algebra->dim();
  }
  if (auto p = top.find("poisson")) {
    s.poisson = parse_poisson(*p, s.dim, s.algebra.get());
  }
  if (s.dim == 0) {
    throw Error(ErrorCode::ConfigError,
                "dim: cannot infer the dimension; give dim, algebra or poisson");
  }
  if (auto m = top.find("metric")) s.metric = parse_metric(*m, s.dim, s.algebra.get());
  if (auto n = top.find("N")) s.N = n->as_vector(s.dim);

  if (auto c = top.find("casimirs")) {
    if (!s.poisson) c->fail("casimirs need a poisson structure");
    c->require_array();
    const auto pts = casimir_sample_points(s.dim, 0);
    for (std::size_t i = 0; i < c->size(); ++i) {
      auto fs = parse_function((*c)[i], s.dim, s.algebra.get());
      const std::string path = (*c)[i].path();
      s.poisson = at_path(path, [&] {
        return s.poisson->with_casimir(fs.fn.renamed("C" + std::to_string(s.poisson->casimirs().size() + 1)), pts);
      });
    }
  }
  if (auto g = top.find("G")) {
    auto fs = parse_function(*g, s.dim, s.algebra.get());
    s.G = fs.fn;
    s.g_is_linear = fs.linear;
    if (fs.killing_n && !s.N) s.N = fs.killing_n;
  }
  if (auto c = top.find("chart")) {
    s.chart = parse_chart(*c, s.dim, s.poisson ? &*s.poisson : nullptr, s.chart_kind);
  }
  if (auto f = top.find("flow")) s.flow = parse_flow(*f, s);
  if (auto g = top.find("grid")) s.grid = parse_grid(*g, s);

  if (auto t = top.find("tolerances")) {
    if (!t->is_object()) t->fail("expected an object");
    for (const auto& item : t->raw().items()) {
      const Node v = t->at(item.key());
      s.tolerances.set(item.key(), v.as_double(), v.path());
    }
  }
  s.tolerances.apply_environment();
  if (auto v = top.find("seed")) s.seed = v->as_u64();
  if (auto v = top.find("points")) s.points = v->as_size(1);
  if (auto v = top.find("orbit_points")) s.orbit_points = v->as_size(1);
  if (auto v = top.find("suites")) s.suites = v->as_strings();
  return s;
}

json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string(source) + ": " + e.what());
  }
}

const std::vector<std::pair<std::string, std::string>>& builtins() {
  static const std::vector<std::pair<std::string, std::string>> table{
      {"sl2-hyperbolic", R"({
  // sl(2,R) in the (x, y, z) basis, Killing metric diag(1, 1, -1),
  // upper sheet x^2 + y^2 - z^2 = -1 in the stereographic disc chart
  "name": "sl2-hyperbolic",
  "algebra": "sl2R_xyz",
  "metric": "killing",
  "poisson": "lie_poisson",
  "chart": "hyperbolic_disc",
  "G": {"expr": "x3"},
  "flow": {"h": 1e-3, "T": 10, "x0": [0.6, -0.3, 1.2041594578792296], "field": "v_G",
           "output_every": 100},
  "grid": {"ranges": [[-0.9, 0.9], [-0.9, 0.9]], "resolution": 21, "max_radius": 0.9}
})"},
      {"sl2-onesheet", R"({
  // one-sheeted hyperboloid x^2 + y^2 - z^2 = 1
  "name": "sl2-onesheet",
  "algebra": "sl2R_xyz",
  "metric": "killing",
  "poisson": "lie_poisson",
  "chart": {"builtin": "one_sheet", "l": 1.0},
  "G": {"expr": "x3"},
  "grid": {"ranges": [[-3.0, 3.0], [-2.0, 2.0]], "resolution": [10, 10]}
})"},
      {"sl2-cone", R"({
  // upper light cone; the induced metric is degenerate
  "name": "sl2-cone",
  "algebra": "sl2R_xyz",
  "metric": "killing",
  "poisson": "lie_poisson",
  "chart": "light_cone",
  "G": {"expr": "x3"},
  "grid": {"ranges": [[-3.0, 3.0], [0.1, 2.8]], "resolution": [13, 10]}
})"},
      {"so3-orbit", R"({
  "name": "so3-orbit",
  "algebra": "so3",
  "metric": "killing",
  "poisson": "lie_poisson",
  "chart": {"builtin": "sphere", "radius": 1.0},
  "G": {"killing_linear": [0, 0, 1]},
  "grid": {"ranges": [[0.3, 2.8], [-3.0, 3.0]], "resolution": [11, 11]},
  "tolerances": {"theorem4": 1e-9}
})"},
      {"so3-brockett", R"({
  "name": "so3-brockett",
  "algebra": "so3",
  "metric": "killing",
  "poisson": "lie_poisson",
  "chart": {"builtin": "sphere", "radius": 1.0},
  "G": {"killing_linear": [0, 0, 1]},
  "flow": {"h": 1e-2, "T": 50, "x0": [0.479425538604203, 0, 0.8775825618903728],
           "field": "brockett", "output_every": 10}
})"},
      {"so4-orbit", R"({
  // generic regular orbit of so(4), cut out by k(x, x) and the Pfaffian
  "name": "so4-orbit",
  "algebra": "so4",
  "metric": "killing",
  "poisson": "lie_poisson",
  "casimirs": [
    {"polynomial": [[1, [1, 0, 0, 0, 0, 1]], [-1, [0, 1, 0, 0, 1, 0]], [1, [0, 0, 1, 1, 0, 0]]]}
  ],
  "chart": {"level_set": {"base": [0.9, 0.3, -0.2, 0.5, 0.1, 1.7], "radius": 0.3}},
  "G": {"killing_linear": [1, 0, 0, 0, 0, 2]},
  "flow": {"h": 1e-3, "T": 20, "x0": [0.9, 0.3, -0.2, 0.5, 0.1, 1.7], "field": "brockett",
           "output_every": 100},
  "grid": {"ranges": [[-0.2, 0.2], [-0.2, 0.2], [-0.2, 0.2], [-0.2, 0.2]],
           "resolution": 3, "max_radius": 0.29}
})"},
      {"canonical-r2n", R"({
  // canonical R^4 with the Euclidean metric; the flow is a harmonic oscillator
  "name": "canonical-r2n",
  "poisson": {"type": "canonical", "n": 2},
  "metric": "euclidean",
  "chart": {"builtin": "canonical", "n": 2},
  "G": {"quadratic": [[0.5, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 0.5, 0], [0, 0, 0, 0.5]]},
  "flow": {"h": 1e-3, "T": 6.283185307179586, "x0": [1, 0, 0, 1], "field": "hamiltonian",
           "output_every": 100},
  "grid": {"ranges": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]], "resolution": 3}
})"},
  };
  return table;
}

}  // namespace

Tolerances::Tolerances() : values_(default_tolerances()) {}

double Tolerances::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown tolerance '" + key + "'");
  }
  return it->second;
}

void Tolerances::set(const std::string& key, double value, const std::string& where) {
  if (!values_.contains(key)) config_error(where, "unknown tolerance key");
  if (!(value > 0.0) || !std::isfinite(value)) config_error(where, "tolerance must be positive");
  values_[key] = value;
}

void Tolerances::apply_environment() {
  for (auto& [key, value] : values_) {
    std::string var = "DBRACKET_TOL_" + key;
    std::transform(var.begin(), var.end(), var.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    const char* text = std::getenv(var.c_str());
    if (text == nullptr) continue;
    char* end = nullptr;
    const double v = std::strtod(text, &end);
    if (end == text || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
      config_error(var, "expected a positive number, got '" + std::string(text) + "'");
    }
    value = v;
  }
}

Scenario load_scenario_text(std::string_view text, std::string_view source) {
  return build(parse_json(text, source), std::filesystem::current_path());
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::filesystem::path dir = std::filesystem::absolute(path).parent_path();
  return build(parse_json(buffer.str(), path), dir);
}

Scenario builtin_scenario(const std::string& name) {
  return load_scenario_text(builtin_scenario_config(name), name);
}

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : builtins()) names.push_back(name);
  return names;
}

std::string builtin_scenario_config(const std::string& name) {
  for (const auto& [n, text] : builtins()) {
    if (n == name) return text;
  }
  std::string known;
  for (const auto& [n, text] : builtins()) known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::ConfigError,
              "scenario: unknown built-in '" + name + "' (" + known + ")");
}

}  // namespace dbracket::cli
