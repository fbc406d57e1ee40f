#include "dbracket/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "json.hpp"

#include "dbracket/charts.hpp"
#include "dbracket/error.hpp"
#include "dbracket/numerics.hpp"

namespace dbracket::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

// Running maximum of a residual and the point where it occurred. NaN sticks.
struct Worst {
  double value = 0.0;
  std::optional<Vector> at;
  std::size_t count = 0;

  void add(double r, const Vector& x) {
    ++count;
    if (std::isnan(value)) return;
    if (std::isnan(r) || r > value || !at) {
      value = r;
      at = x;
    }
  }
};

bool is_leaf_failure(ErrorCode c) {
  return c == ErrorCode::DegenerateInducedMetric ||
         c == ErrorCode::NonInvertibleLeafBivector ||
         c == ErrorCode::OutsideChartDomain;
}

class Runner {
 public:
  Runner(const Scenario& s, VerifyReport& report) : s_(s), report_(report) {}

  void run(const std::string& suite, std::size_t index) {
    suite_ = suite;
    rng_.seed(s_.seed + 0x9e3779b97f4a7c15ULL * (index + 1));
    if (suite == "golden_sl2") golden_sl2();
    else if (suite == "theorem2") theorem2();
    else if (suite == "theorem3") theorem3();
    else if (suite == "theorem4") theorem4();
    else if (suite == "remark") remark();
    else if (suite == "casimir") casimir();
    else if (suite == "kernel") kernel();
    else if (suite == "chart") chart();
    else if (suite == "hamiltonian") hamiltonian();
  }

 private:
  double tol(const std::string& key) const { return s_.tolerances.get(key); }

  void record(const std::string& check, const Worst& w, double tolerance,
              std::string note = {}) {
    CheckResult r;
    r.suite = suite_;
    r.check = check;
    r.point = w.at;
    r.residual = w.value;
    r.tolerance = tolerance;
    r.pass = !std::isnan(w.value) && w.value <= tolerance;
    r.note = std::move(note);
    report_.checks.push_back(std::move(r));
  }

  void record_value(const std::string& check, double residual, double tolerance,
                    std::string note = {}) {
    Worst w;
    w.value = residual;
    record(check, w, tolerance, std::move(note));
  }

  void skip(std::string reason) {
    report_.skipped.push_back({suite_, std::move(reason)});
  }

  Vector ambient_point() {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Vector x(static_cast<Eigen::Index>(s_.dim));
    for (auto& v : x) v = dist(rng_);
    return x;
  }

  Vector random_vector(std::size_t n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector x(static_cast<Eigen::Index>(n));
    for (auto& v : x) v = dist(rng_);
    return x;
  }

  Matrix random_symmetric(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    Matrix a(m, m);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) a(i, j) = dist(rng_);
    return 0.5 * (a + a.transpose());
  }

  std::vector<Vector> leaf_points(std::size_t count) {
    std::vector<Vector> pts;
    if (s_.chart->has_sampler()) {
      for (std::size_t i = 0; i < count; ++i) pts.push_back(s_.chart->sample(rng_));
    } else if (s_.grid) {
      pts = grid_points(*s_.grid);
      pts.erase(std::remove_if(pts.begin(), pts.end(),
                               [&](const Vector& u) { return !s_.chart->in_domain(u); }),
                pts.end());
    }
    return pts;
  }

  // Evaluates fn at each leaf point; leaf degeneracies are counted, not fatal.
  // Returns false (and records a skip) when no point survives.
  bool over_leaf(const std::vector<Vector>& pts,
                 const std::function<void(const Vector&)>& fn, std::string& note) {
    std::size_t failed = 0;
    std::optional<ErrorCode> code;
    for (const auto& u : pts) {
      try {
        fn(u);
      } catch (const Error& e) {
        if (!is_leaf_failure(e.code())) throw;
        ++failed;
        code = e.code();
      }
    }
    if (pts.empty()) {
      skip("no chart points to sample (chart has no sampler and no grid is given)");
      return false;
    }
    if (failed == pts.size()) {
      skip(std::string(to_string(*code)) + " at every sampled point");
      return false;
    }
    if (failed > 0) {
      note = std::to_string(failed) + " of " + std::to_string(pts.size()) +
             " points skipped (" + std::string(to_string(*code)) + ")";
    }
    return true;
  }

  void golden_sl2() {
    if (s_.algebra_name != "sl2R_e" && s_.algebra_name != "sl2R_xyz") {
      skip("algebra is not a built-in sl(2,R) basis");
      return;
    }
    const double t = tol("golden");
    const auto standard = algebras::sl2_standard();
    const auto alg = algebras::sl2_hyperbolic();
    Matrix k_std(3, 3);
    k_std << 0, 4, 0, 4, 0, 0, 0, 0, 8;
    record_value("killing_standard", max_abs(standard.killing() - k_std), t);
    const Matrix k_rot = Vector((Vector(3) << 1, 1, -1).finished()).asDiagonal();
    record_value("killing_rotated", max_abs(alg.killing() - k_rot), t);

    const auto g = MetricField::killing(alg);
    const auto p = lie_poisson(alg);
    Worst pi_err, d_err, cas_err;
    const double r2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < s_.points; ++i) {
      const Vector v = ambient_point();
      const double x = v[0], y = v[1], z = v[2];
      Matrix pi(3, 3);
      pi << 0, z, y, -z, 0, -x, -y, x, 0;
      pi *= r2;
      Matrix d(3, 3);
      d << -y * y + z * z, x * y, x * z, x * y, -x * x + z * z, y * z, x * z, y * z,
          x * x + y * y;
      d *= 0.5;
      pi_err.add(max_abs(p.at(v) - pi), v);
      d_err.add(max_abs(cometric_D(g, p, v) - d), v);
      const Vector grad_c = (Vector(3) << 2 * x, 2 * y, -2 * z).finished();
      cas_err.add((p.at(v) * grad_c).norm(), v);
    }
    record("poisson_closed_form", pi_err, t);
    record("cometric_closed_form", d_err, t);
    record("casimir_x2_y2_minus_z2", cas_err, t);
    {
      const Vector x = (Vector(3) << 1, 0, std::sqrt(2.0)).finished();
      const Vector want = -0.5 * (Vector(3) << std::sqrt(2.0), 0, 1).finished();
      Worst w;
      w.add(max_abs(generalized_double_bracket(g, p, ScalarFunction::coordinate(2, 3), x) - want), x);
      record("v_G_height_on_H2", w, t);
    }

    const double tm = tol("golden_metric");
    const std::string& kind = s_.chart_kind;
    if (!s_.chart) return;
    if (kind == "hyperbolic_disc") {
      Worst tau_err, gind_err;
      for (int i = 0; i < 21; ++i)
        for (int j = 0; j < 21; ++j) {
          const Vector u = (Vector(2) << -0.9 + 0.09 * i, -0.9 + 0.09 * j).finished();
          const double rr = u.squaredNorm();
          if (rr > 0.81 + 1e-12) continue;
          const double f = 1.0 / ((1.0 - rr) * (1.0 - rr));
          const Matrix id = Matrix::Identity(2, 2);
          tau_err.add(max_abs(double_bracket_metric(g, p, *s_.chart, u) - 8.0 * f * id), u);
          gind_err.add(max_abs(induced_metric(g, *s_.chart, u) - 4.0 * f * id), u);
        }
      record("disc_tau_grid", tau_err, tm);
      record("disc_induced_metric_grid", gind_err, tm);
      Worst origin;
      const Vector zero = Vector::Zero(2);
      origin.add(max_abs(double_bracket_metric(g, p, *s_.chart, zero) -
                         8.0 * Matrix::Identity(2, 2)),
                 zero);
      record("disc_tau_origin", origin, tm);
      Worst omega;
      const Matrix j = (Matrix(2, 2) << 0, -1, 1, 0).finished();
      omega.add(max_abs(leaf_symplectic(p, *s_.chart, zero) - 4.0 * std::sqrt(2.0) * j), zero);
      record("disc_omega_origin", omega, tm);
    } else if (kind == "two_sheet" || kind == "one_sheet") {
      Worst tau_err;
      for (std::size_t i = 0; i < s_.points; ++i) {
        const Vector u = s_.chart->sample(rng_);
        const double ch = std::cosh(u[1]);
        const Vector diag = kind == "two_sheet"
                                ? (Vector(2) << 2 * (ch * ch - 1), 2).finished()
                                : (Vector(2) << -2 * ch * ch, 2).finished();
        tau_err.add(max_abs(double_bracket_metric(g, p, *s_.chart, u) - Matrix(diag.asDiagonal())), u);
      }
      record(kind + "_tau", tau_err, tm);
    } else if (kind == "light_cone") {
      std::size_t total = 0, non_degenerate = 0;
      Worst w;
      for (int i = 0; i <= 12; ++i)
        for (int j = 0; j < 10; ++j) {
          const Vector u = (Vector(2) << -3.0 + 0.5 * i, 0.1 + 0.3 * j).finished();
          ++total;
          try {
            (void)induced_metric(g, *s_.chart, u);
            ++non_degenerate;
            w.at = u;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateInducedMetric) throw;
          }
        }
      w.value = static_cast<double>(non_degenerate);
      record("cone_degenerate_everywhere", w, 0.0,
             "residual counts non-degenerate points out of " + std::to_string(total));
    }
  }

  void theorem2() {
    if (!s_.algebra || !s_.algebra->is_semisimple()) {
      skip("needs a semisimple algebra");
      return;
    }
    const auto& alg = *s_.algebra;
    const auto g = MetricField::killing(alg);
    const auto p = lie_poisson(alg);
    const double t = tol("theorem2");
    Worst lin, quad, custom;
    for (std::size_t i = 0; i < s_.points; ++i) {
      const Vector x = ambient_point();
      const auto gl = ScalarFunction::linear(random_vector(s_.dim));
      const auto gq = ScalarFunction::quadratic(random_symmetric(s_.dim));
      lin.add(max_abs(generalized_double_bracket(g, p, gl, x) - double_bracket_lie(alg, gl, x)), x);
      quad.add(max_abs(generalized_double_bracket(g, p, gq, x) - double_bracket_lie(alg, gq, x)), x);
      if (s_.G) {
        custom.add(max_abs(generalized_double_bracket(g, p, *s_.G, x) -
                           double_bracket_lie(alg, *s_.G, x)),
                   x);
      }
    }
    record("linear_G", lin, t);
    record("quadratic_G", quad, t);
    if (s_.G) record("scenario_G", custom, t);
  }

  void theorem3() {
    if (!s_.metric || !s_.poisson || !s_.chart) {
      skip("needs metric, poisson and chart");
      return;
    }
    const double t = tol("theorem3");
    const auto pts = leaf_points(s_.points);
    const LeafChart fd = s_.chart->with_fd_jacobians();
    std::vector<ScalarFunction> linear;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      linear.push_back(ScalarFunction::linear(random_vector(s_.dim)));
    }
    Worst analytic, numeric, custom;
    std::size_t k = 0;
    std::string note;
    const bool any = over_leaf(pts, [&](const Vector& u) {
      const auto& G = linear[k++];
      const double a = gradient_theorem_residual(*s_.metric, *s_.poisson, *s_.chart, G, u);
      const double n = gradient_theorem_residual(*s_.metric, *s_.poisson, fd, G, u);
      analytic.add(a, u);
      numeric.add(n, u);
      if (s_.G) {
        custom.add(gradient_theorem_residual(*s_.metric, *s_.poisson, *s_.chart, *s_.G, u), u);
      }
    }, note);
    if (!any) return;
    record("linear_G_analytic_jacobians", analytic, t, note);
    record("linear_G_fd_jacobians", numeric, t, note);
    if (s_.G) record("scenario_G_analytic_jacobians", custom, t, note);
  }

  void theorem4() {
    if (!s_.algebra || !s_.algebra->is_compact()) {
      skip("needs a compact semisimple algebra");
      return;
    }
    if (!s_.chart) {
      skip("needs an orbit chart");
      return;
    }
    const auto& alg = *s_.algebra;
    const Vector n = s_.N ? *s_.N : random_vector(s_.dim);
    const auto h = killing_pairing(alg, n);
    const auto pts = leaf_points(s_.orbit_points);
    Worst sum, cross;
    std::string note;
    const bool any = over_leaf(pts, [&](const Vector& u) {
      sum.add(tau_vs_normal_check(alg, *s_.chart, u).max_abs_sum, u);
      cross.add(max_abs(normal_gradient(alg, *s_.chart, h, u) -
                        double_bracket_lie(alg, h, s_.chart->phi(u))),
                u);
    }, note);
    if (!any) return;
    record("tau_plus_normal", sum, tol("theorem4"), note);
    record("normal_gradient_is_brockett_field", cross, tol("theorem1"),
           note.empty() ? std::string(s_.N ? "H = k(L, N)" : "H = k(L, N), random N") : note);
  }

  void remark() {
    if (!s_.metric || !s_.poisson || !s_.chart) {
      skip("needs metric, poisson and chart");
      return;
    }
    const auto pts = leaf_points(s_.points);
    Worst w;
    std::string note;
    const bool any = over_leaf(pts, [&](const Vector& u) {
      const Matrix tau = double_bracket_metric(*s_.metric, *s_.poisson, *s_.chart, u);
      const Matrix d = restricted_D(*s_.metric, *s_.poisson, *s_.chart, u);
      w.add(max_abs(d * tau - Matrix::Identity(tau.rows(), tau.cols())), u);
    }, note);
    if (!any) return;
    record("restricted_D_inverts_tau", w, tol("remark"), note);
  }

  void casimir() {
    if (!s_.poisson || s_.poisson->casimirs().empty()) {
      skip("no registered Casimirs");
      return;
    }
    const auto& cs = s_.poisson->casimirs();
    std::vector<Worst> res(cs.size()), tangency(cs.size());
    const bool flow = s_.metric && s_.G;
    for (std::size_t i = 0; i < s_.points; ++i) {
      const Vector x = ambient_point();
      const Matrix pi = s_.poisson->at(x);
      std::optional<Vector> v;
      if (flow) v = generalized_double_bracket(*s_.metric, *s_.poisson, *s_.G, x);
      for (std::size_t c = 0; c < cs.size(); ++c) {
        const Vector grad = cs[c].gradient(x);
        res[c].add((pi * grad).norm(), x);
        if (v) tangency[c].add(std::abs(grad.dot(*v)), x);
      }
    }
    for (std::size_t c = 0; c < cs.size(); ++c) {
      record("residual " + cs[c].name(), res[c], tol("casimir"));
      if (flow) record("v_G_tangency " + cs[c].name(), tangency[c], tol("casimir"));
    }
  }

  void kernel() {
    if (!s_.poisson) {
      skip("needs a poisson structure");
      return;
    }
    const auto count = [&](const MetricField& g, Worst& w) {
      std::size_t mismatches = 0;
      for (std::size_t i = 0; i < s_.points; ++i) {
        const Vector x = ambient_point();
        const auto r = kernel_rank_check(g, *s_.poisson, x, tol("rank"));
        if (!r.equal) {
          ++mismatches;
          w.at = x;
        }
      }
      w.value = static_cast<double>(mismatches);
    };
    if (s_.metric && s_.metric->positive_definite()) {
      Worst w;
      count(*s_.metric, w);
      record("rank_D_equals_rank_Pi", w, 0.0, "residual counts mismatching points");
    }
    Worst e;
    count(MetricField::euclidean(s_.dim), e);
    record("rank_D_equals_rank_Pi_euclidean", e, 0.0,
           s_.metric && s_.metric->positive_definite()
               ? "residual counts mismatching points"
               : "scenario metric is not positive definite; checked with the Euclidean metric only");
  }

  void chart() {
    if (!s_.chart) {
      skip("needs a chart");
      return;
    }
    const auto pts = leaf_points(s_.points);
    if (pts.empty()) {
      skip("no chart points to sample (chart has no sampler and no grid is given)");
      return;
    }
    std::vector<ScalarFunction> cs;
    if (s_.poisson) cs = s_.poisson->casimirs();
    const auto diag = check_chart(*s_.chart, pts, cs);
    record_value("roundtrip", diag.roundtrip, tol("chart_roundtrip"));
    record_value("jacobian_identity", diag.jacobian_identity,
                 s_.chart->has_analytic_jacobians() ? tol("chart_jacobian")
                                                    : tol("chart_jacobian_fd"));
    if (!cs.empty()) {
      record_value("casimir_constancy", diag.casimir_variation, tol("chart_casimir"));
    }
    if (s_.chart->has_analytic_jacobians()) {
      const LeafChart fd = s_.chart->with_fd_jacobians();
      Worst w;
      for (const auto& u : pts) {
        const Vector x = s_.chart->phi(u);
        w.add(std::max(max_abs(s_.chart->jac_phi(u) - fd.jac_phi(u)),
                       max_abs(s_.chart->jac_coordinates(x) - fd.jac_coordinates(x))),
              u);
      }
      record("analytic_vs_fd_jacobians", w, tol("chart_jacobian_fd"));
    }
    if (s_.metric && s_.poisson) {
      Worst w;
      std::string note;
      if (over_leaf(pts, [&](const Vector& u) {
            const Matrix tau = double_bracket_metric(*s_.metric, *s_.poisson, *s_.chart, u);
            w.add(symmetry_defect(tau) / std::max(1.0, max_abs(tau)), u);
          }, note)) {
        record("tau_symmetry", w, tol("tau_symmetry"), note);
      }
    }
  }

  void hamiltonian() {
    if (!s_.poisson) {
      skip("needs a poisson structure");
      return;
    }
    const auto& p = *s_.poisson;
    const bool lie = p.kind() == PoissonKind::LiePoisson && s_.algebra &&
                     s_.algebra->is_semisimple();
    Worst field, anti, coadjoint;
    for (std::size_t i = 0; i < s_.points; ++i) {
      const Vector x = ambient_point();
      const ScalarFunction f = ScalarFunction::linear(random_vector(s_.dim));
      const ScalarFunction h = i % 2 == 0
                                   ? ScalarFunction::linear(random_vector(s_.dim))
                                   : ScalarFunction::quadratic(random_symmetric(s_.dim));
      const double fh = p.bracket(f, h, x);
      const Vector xh = hamiltonian_field(p, h)(x);
      field.add(std::abs(fh - f.gradient(x).dot(xh)), x);
      anti.add(std::abs(fh + p.bracket(h, f, x)), x);
      if (lie) {
        const Vector dh = h.gradient(x);
        coadjoint.add(
            (xh + s_.algebra->bracket(x, s_.algebra->killing_inverse() * dh)).norm(), x);
      }
    }
    const double t = tol("hamiltonian");
    record("bracket_matches_field", field, t);
    record("antisymmetry", anti, t);
    if (lie) record("field_is_coadjoint_action", coadjoint, t);
  }

  const Scenario& s_;
  VerifyReport& report_;
  std::string suite_;
  std::mt19937_64 rng_;
};

ordered_json vector_json(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(x);
  return a;
}

ordered_json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

std::vector<Vector> grid_points(const GridSpec& grid) {
  std::vector<Vector> pts;
  const std::size_t d = grid.ranges.size();
  if (d == 0) return pts;
  std::vector<std::size_t> idx(d, 0);
  const auto coord = [&](std::size_t i, std::size_t k) {
    const auto [a, b] = grid.ranges[i];
    const std::size_t n = grid.resolution[i];
    return n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  };
  while (true) {
    Vector u(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) u[static_cast<Eigen::Index>(i)] = coord(i, idx[i]);
    if (!grid.max_radius || u.norm() <= *grid.max_radius * (1.0 + 1e-12)) pts.push_back(u);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (++idx[i] < grid.resolution[i]) break;
      idx[i] = 0;
      if (i == 0) return pts;
    }
  }
}

bool VerifyReport::all_pass() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; }));
}

std::string VerifyReport::to_json() const {
  ordered_json root;
  root["scenario"] = scenario;
  root["seed"] = seed;
  ordered_json entries = ordered_json::array();
  ordered_json per_suite = ordered_json::object();
  for (const auto& c : checks) {
    ordered_json e;
    e["suite"] = c.suite;
    e["check"] = c.check;
    e["point"] = c.point ? vector_json(*c.point) : ordered_json(nullptr);
    e["residual"] = number_json(c.residual);
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    if (!c.note.empty()) e["note"] = c.note;
    entries.push_back(std::move(e));
    auto& s = per_suite[c.suite];
    if (s.is_null()) s = {{"checks", 0}, {"failed", 0}, {"max_residual", 0.0}};
    s["checks"] = s["checks"].get<int>() + 1;
    if (!c.pass) s["failed"] = s["failed"].get<int>() + 1;
    const double prev = s["max_residual"].is_number() ? s["max_residual"].get<double>()
                                                      : std::numeric_limits<double>::quiet_NaN();
    if (std::isnan(c.residual) || std::isnan(prev)) s["max_residual"] = "nan";
    else s["max_residual"] = std::max(prev, c.residual);
  }
  root["entries"] = std::move(entries);
  ordered_json skipped_json = ordered_json::array();
  for (const auto& s : skipped) skipped_json.push_back({{"suite", s.suite}, {"reason", s.reason}});
  ordered_json summary;
  summary["checks"] = checks.size();
  summary["passed"] = checks.size() - failures();
  summary["failed"] = failures();
  summary["skipped_suites"] = std::move(skipped_json);
  summary["suites"] = std::move(per_suite);
  summary["pass"] = all_pass();
  root["summary"] = std::move(summary);
  return root.dump(2) + "\n";
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"golden_sl2", "theorem2", "theorem3",
                                              "theorem4",   "remark",   "casimir",
                                              "kernel",     "chart",    "hamiltonian"};
  return names;
}

VerifyReport run_verify(const Scenario& scenario, const std::vector<std::string>& suites) {
  const auto& all = suite_names();
  std::vector<std::string> selected = suites.empty() ? scenario.suites : suites;
  for (const auto& s : selected) {
    if (std::find(all.begin(), all.end(), s) == all.end()) {
      std::string known;
      for (const auto& n : all) known += (known.empty() ? "" : ", ") + n;
      throw Error(ErrorCode::ConfigError, "suites: unknown suite '" + s + "' (" + known + ")");
    }
  }
  if (selected.empty()) selected = all;
  VerifyReport report;
  report.scenario = scenario.name;
  report.seed = scenario.seed;
  Runner runner(scenario, report);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (std::find(selected.begin(), selected.end(), all[i]) != selected.end()) {
      runner.run(all[i], i);
    }
  }
  return report;
}

}  // namespace dbracket::cli
