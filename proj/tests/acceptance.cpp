// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dbracket/algebra.hpp"
#include "dbracket/charts.hpp"
#include "dbracket/cli/commands.hpp"
#include "dbracket/cli/scenario.hpp"
#include "dbracket/cometric.hpp"
#include "dbracket/error.hpp"
#include "dbracket/flow.hpp"
#include "dbracket/leaf.hpp"
#include "dbracket/numerics.hpp"
#include "dbracket/poisson.hpp"
#include "dbracket/polynomial.hpp"

using namespace dbracket;

namespace {

constexpr std::uint64_t kSeed = 42;

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Matrix diag(double a, double b) { return Vector(vec({a, b})).asDiagonal(); }

Vector uniform_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

Matrix random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  Matrix a(n, n);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = dist(rng);
  return 0.5 * (a + a.transpose());
}

LeafChart so4_orbit() {
  const auto p = lie_poisson(algebras::so(4));
  const auto pfaffian = Polynomial(6, {{1.0, {1, 0, 0, 0, 0, 1}},
                                       {-1.0, {0, 1, 0, 0, 1, 0}},
                                       {1.0, {0, 0, 1, 1, 0, 0}}})
                            .as_function();
  return charts::level_set({p.casimirs().front(), pfaffian},
                           vec({0.9, 0.3, -0.2, 0.5, 0.1, 1.7}), 0.3);
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto standard = algebras::sl2_standard();
  const auto alg = algebras::sl2_hyperbolic();
  Matrix k(3, 3);
  k << 0, 4, 0, 4, 0, 0, 0, 0, 8;
  double worst = max_abs(standard.killing() - k);
  worst = std::max(worst, max_abs(alg.killing() - Matrix(vec({1, 1, -1}).asDiagonal())));
  const auto g = MetricField::killing(alg);
  const auto p = lie_poisson(alg);
  std::mt19937_64 rng(kSeed);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 100; ++i) {
    const Vector v = uniform_vector(rng, 3, -2, 2);
    const double x = v[0], y = v[1], z = v[2];
    Matrix pi(3, 3);
    pi << 0, z, y, -z, 0, -x, -y, x, 0;
    Matrix d(3, 3);
    d << -y * y + z * z, x * y, x * z, x * y, -x * x + z * z, y * z, x * z, y * z, x * x + y * y;
    worst = std::max(worst, max_abs(p.at(v) - s * pi));
    worst = std::max(worst, max_abs(cometric_D(g, p, v) - 0.5 * d));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 1.0,
          "max error " + fmt(worst) + " (<= 1e-12), " + fmt(t) + " s (< 1 s)"};
}

Outcome ac2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto alg = algebras::sl2_hyperbolic();
  const auto g = MetricField::killing(alg);
  const auto p = lie_poisson(alg);
  const auto disc = charts::hyperbolic_disc();
  double worst_tau = 0.0, worst_g = 0.0;
  int count = 0;
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) {
      const Vector u = vec({-0.9 + 1.8 * i / 20.0, -0.9 + 1.8 * j / 20.0});
      const double r2 = u.squaredNorm();
      if (r2 > 0.81 * (1 + 1e-12)) continue;
      ++count;
      const double f = 1.0 / ((1 - r2) * (1 - r2));
      worst_tau = std::max(worst_tau, max_abs(double_bracket_metric(g, p, disc, u) -
                                              8 * f * Matrix::Identity(2, 2)));
      worst_g = std::max(worst_g,
                         max_abs(induced_metric(g, disc, u) - 4 * f * Matrix::Identity(2, 2)));
    }
  const double t = seconds_since(t0);
  return {worst_tau <= 1e-9 && worst_g <= 1e-9 && t < 1.0,
          std::to_string(count) + " points, tau " + fmt(worst_tau) + ", g_ind " + fmt(worst_g) +
              " (<= 1e-9), " + fmt(t) + " s (< 1 s)"};
}

Outcome ac3() {
  const auto alg = algebras::sl2_hyperbolic();
  const auto g = MetricField::killing(alg);
  const auto p = lie_poisson(alg);
  double two = 0.0, one = 0.0;
  for (double c : {0.5, 1.0, 2.0}) {
    const auto chart = charts::two_sheet_hyperboloid(c);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        const Vector u = vec({-3.0 + 6.0 * i / 9.0, 0.2 + 1.8 * j / 9.0});
        const double ch = std::cosh(u[1]);
        two = std::max(two, max_abs(double_bracket_metric(g, p, chart, u) -
                                    diag(2 * (ch * ch - 1), 2)));
      }
  }
  const auto chart = charts::one_sheet_hyperboloid(1.0);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const Vector u = vec({-3.0 + 6.0 * i / 9.0, -2.0 + 4.0 * j / 9.0});
      const double ch = std::cosh(u[1]);
      one = std::max(one, max_abs(double_bracket_metric(g, p, chart, u) - diag(-2 * ch * ch, 2)));
    }
  return {two <= 1e-9 && one <= 1e-9,
          "two-sheet (c = 0.5, 1, 2) " + fmt(two) + ", one-sheet " + fmt(one) + " (<= 1e-9)"};
}

Outcome ac4() {
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (const auto& alg : {algebras::sl2_hyperbolic(), algebras::so3(), algebras::so(4)}) {
    const auto n = static_cast<Eigen::Index>(alg.dim());
    const auto g = MetricField::killing(alg);
    const auto p = lie_poisson(alg);
    for (int kind = 0; kind < 2; ++kind)
      for (int i = 0; i < 100; ++i) {
        const Vector xi = uniform_vector(rng, n, -1, 1);
        const ScalarFunction G = kind == 0 ? ScalarFunction::linear(uniform_vector(rng, n, -1, 1))
                                           : ScalarFunction::quadratic(random_symmetric(rng, n));
        worst = std::max(worst, max_abs(generalized_double_bracket(g, p, G, xi) -
                                        double_bracket_lie(alg, G, xi)));
      }
  }
  return {worst <= 1e-12, "600 cases, max " + fmt(worst) + " (<= 1e-12)"};
}

Outcome ac5() {
  std::mt19937_64 rng(kSeed);
  struct Case {
    std::string name;
    LieAlgebra alg;
    LeafChart chart;
  };
  std::vector<Case> cases{{"H2", algebras::sl2_hyperbolic(), charts::hyperbolic_disc()},
                          {"H_l", algebras::sl2_hyperbolic(), charts::one_sheet_hyperboloid(1.0)},
                          {"S2", algebras::so3(), charts::sphere(1.0)}};
  std::string detail;
  bool pass = true;
  for (const auto& c : cases) {
    const auto g = MetricField::killing(c.alg);
    const auto p = lie_poisson(c.alg);
    const auto fd = c.chart.with_fd_jacobians();
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vector u = c.chart.sample(rng);
      const auto G = ScalarFunction::linear(uniform_vector(rng, 3, -1, 1));
      worst = std::max(worst, gradient_theorem_residual(g, p, fd, G, u));
    }
    pass = pass && worst <= 1e-8;
    detail += c.name + " " + fmt(worst) + ", ";
  }
  return {pass, detail + "FD jacobians (<= 1e-8)"};
}

Outcome ac6() {
  std::mt19937_64 rng(kSeed);
  const auto sl2 = algebras::sl2_hyperbolic();
  const auto so3 = algebras::so3();
  const auto so4 = algebras::so(4);
  struct Case {
    LeafChart chart;
    MetricField g;
    PoissonStructure p;
  };
  const auto k = [](const LieAlgebra& a) { return MetricField::killing(a); };
  std::vector<Case> cases{
      {charts::hyperbolic_disc(), k(sl2), lie_poisson(sl2)},
      {charts::two_sheet_hyperboloid(2.0), k(sl2), lie_poisson(sl2)},
      {charts::one_sheet_hyperboloid(0.5), k(sl2), lie_poisson(sl2)},
      {charts::sphere(1.5), k(so3), lie_poisson(so3)},
      {so4_orbit(), k(so4), lie_poisson(so4)},
      {charts::canonical(2), MetricField::euclidean(4), canonical_poisson(2)},
  };
  double worst = 0.0;
  for (const auto& c : cases)
    for (int i = 0; i < 100; ++i) {
      const Vector u = c.chart.sample(rng);
      const Matrix tau = double_bracket_metric(c.g, c.p, c.chart, u);
      const Matrix d = restricted_D(c.g, c.p, c.chart, u);
      worst = std::max(worst, max_abs(d * tau - Matrix::Identity(tau.rows(), tau.cols())));
    }
  return {worst <= 1e-9, "6 charts (light cone has no tau), max " + fmt(worst) + " (<= 1e-9)"};
}

Outcome ac7() {
  std::mt19937_64 rng(kSeed);
  const auto so3 = algebras::so3();
  const auto so4 = algebras::so(4);
  double sum3 = 0.0, sum4 = 0.0, cross = 0.0;
  const auto sphere = charts::sphere(1.0);
  const auto orbit = so4_orbit();
  const auto h3 = killing_pairing(so3, vec({0.3, -0.4, 1.0}));
  const auto h4 = killing_pairing(so4, vec({1, 0, 0, 0, 0, 2}));
  for (int i = 0; i < 50; ++i) {
    const Vector u = sphere.sample(rng);
    sum3 = std::max(sum3, tau_vs_normal_check(so3, sphere, u).max_abs_sum);
    cross = std::max(cross, max_abs(normal_gradient(so3, sphere, h3, u) -
                                    double_bracket_lie(so3, h3, sphere.phi(u))));
  }
  for (int i = 0; i < 50; ++i) {
    const Vector u = orbit.sample(rng);
    sum4 = std::max(sum4, tau_vs_normal_check(so4, orbit, u).max_abs_sum);
    cross = std::max(cross, max_abs(normal_gradient(so4, orbit, h4, u) -
                                    double_bracket_lie(so4, h4, orbit.phi(u))));
  }
  return {sum3 <= 1e-8 && sum4 <= 1e-8 && cross <= 1e-8,
          "|tau + n| so3 " + fmt(sum3) + ", so4 " + fmt(sum4) + " (<= 1e-8); n-gradient vs [L,[L,N]] " +
              fmt(cross) + " (<= 1e-8)"};
}

Outcome ac8() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto alg = algebras::so3();
  const Vector n = vec({0, 0, 1});
  const Vector l0 = vec({std::sin(0.5), 0, std::cos(0.5)});
  const auto run = brockett_flow(alg, n, l0, 1e-2, 50.0);
  const auto eq = equilibrium_report(alg, n, run);
  double drift = 0.0;
  for (const auto& l : run.states) drift = std::max(drift, std::abs(l.norm() - l0.norm()));
  const double t = seconds_since(t0);
  const bool monotone = eq.g_monotone.value_or(false);
  return {eq.final_bracket_norm <= 1e-6 && drift <= 1e-8 && monotone && t < 5.0,
          "|[L,N]| " + fmt(eq.final_bracket_norm) + " (<= 1e-6), |L| drift " + fmt(drift) +
              " (<= 1e-8), G " + (monotone ? "monotone" : "NOT monotone") + ", " + fmt(t) +
              " s (< 5 s)"};
}

Outcome ac9() {
  const auto alg = algebras::sl2_hyperbolic();
  const auto g = MetricField::killing(alg);
  const auto cone = charts::light_cone();
  int total = 0, degenerate = 0;
  for (int i = 0; i <= 12; ++i)
    for (int j = 0; j < 10; ++j) {
      ++total;
      try {
        (void)induced_metric(g, cone, vec({-3.0 + 0.5 * i, 0.1 + 0.3 * j}));
      } catch (const Error& e) {
        degenerate += e.code() == ErrorCode::DegenerateInducedMetric;
      }
    }
  std::ostringstream csv;
  std::size_t rows = 0, tagged = 0;
  bool completed = false;
  try {
    cli::write_leaf_metric_csv(csv, cli::builtin_scenario("sl2-cone"));
    completed = true;
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      ++rows;
      tagged += line.size() >= 24 && line.ends_with(",DegenerateInducedMetric");
    }
  } catch (const std::exception&) {
  }
  return {degenerate == total && completed && rows > 0 && tagged == rows,
          std::to_string(degenerate) + "/" + std::to_string(total) + " grid points degenerate, " +
              std::to_string(tagged) + "/" + std::to_string(rows) + " CSV rows tagged"};
}

Outcome ac10() {
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (const auto& alg : {algebras::sl2_hyperbolic(), algebras::so3()}) {
    const auto p = lie_poisson(alg);
    for (int i = 0; i < 100; ++i) {
      const Vector xi = uniform_vector(rng, 3, -2, 2);
      const ScalarFunction h = i % 2 == 0 ? ScalarFunction::linear(uniform_vector(rng, 3, -1, 1))
                                          : ScalarFunction::quadratic(random_symmetric(rng, 3));
      const Vector dh = h.gradient(xi);
      worst = std::max(worst, (p.at(xi) * dh + alg.bracket(xi, alg.killing_inverse() * dh)).norm());
    }
  }
  int mismatches = 0, checked = 0;
  for (const auto& alg : {algebras::sl2_hyperbolic(), algebras::so3()}) {
    const auto p = lie_poisson(alg);
    const Matrix a = random_symmetric(rng, 3) + Matrix(uniform_vector(rng, 3, -1, 1).asDiagonal());
    const auto g = MetricField::constant(a * a.transpose() + Matrix::Identity(3, 3));
    for (int i = 0; i < 100; ++i) {
      Vector x = uniform_vector(rng, 3, -2, 2);
      if (i == 0) x.setZero();
      const auto r = kernel_rank_check(g, p, x);
      ++checked;
      mismatches += !(r.applicable && r.equal);
    }
  }
  return {worst <= 1e-11 && mismatches == 0,
          "Pi dH + [xi, k^-1 dH] max " + fmt(worst) + " (<= 1e-11); rank(D) = rank(Pi) at " +
              std::to_string(checked - mismatches) + "/" + std::to_string(checked) + " points"};
}

Outcome ac11() {
  const VectorField osc = [](const Vector& x) { return Vector(vec({x[1], -x[0]})); };
  const Vector x0 = vec({1.0, 0.0});
  const double t_end = 2 * std::numbers::pi;
  const auto err = [&](double h) {
    const auto run = integrate(osc, x0, h, t_end);
    const Vector exact = vec({std::cos(t_end), -std::sin(t_end)});
    return std::make_pair((run.final_state() - exact).norm(), run.size() - 1);
  };
  const auto [e1, n1] = err(0.1);
  const auto [e2, n2] = err(0.05);
  const double ratio = e1 / e2;
  return {ratio >= 12 && ratio <= 20,
          "h = 0.1 (" + std::to_string(n1) + " steps) vs 0.05 (" + std::to_string(n2) +
              " steps): ratio " + fmt(ratio) + " (in [12, 20])"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 sl2 golden matrices", ac1},
      {"AC2 hyperbolic disc tau and induced metric", ac2},
      {"AC3 hyperboloid tau", ac3},
      {"AC4 generalized double bracket = Lie double bracket", ac4},
      {"AC5 leaf gradient theorem", ac5},
      {"AC6 restricted D inverts tau", ac6},
      {"AC7 tau = -normal metric", ac7},
      {"AC8 so3 Brockett flow", ac8},
      {"AC9 degenerate cone", ac9},
      {"AC10 Hamiltonian consistency and kernel ranks", ac10},
      {"AC11 RK4 order", ac11},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
