#include "dbracket/flow.hpp"

#include <cmath>
#include <ostream>

#include "dbracket/cometric.hpp"
#include "dbracket/error.hpp"
#include "dbracket/numerics.hpp"
#include "dbracket/poisson.hpp"

namespace dbracket {

const std::vector<double>& Trajectory::channel(const std::string& name) const {
  for (const auto& [key, values] : channels) {
    if (key == name) return values;
  }
  throw Error(ErrorCode::InvalidArgument, "no monitor channel '" + name + "'");
}

bool Trajectory::has_channel(const std::string& name) const {
  for (const auto& entry : channels) {
    if (entry.first == name) return true;
  }
  return false;
}

namespace {

void sample_monitors(Trajectory& traj, std::span<const Monitor> monitors,
                     const Vector& x) {
  for (std::size_t i = 0; i < monitors.size(); ++i) {
    traj.channels[i].second.push_back(monitors[i].fn(x));
  }
}

}  // namespace

Trajectory integrate(const VectorField& field, const Vector& x0, double h,
                     double t_end, std::span<const Monitor> monitors) {
  if (!(h > 0) || !std::isfinite(h)) {
    throw Error(ErrorCode::InvalidArgument, "step must be positive", h);
  }
  if (!(t_end >= 0) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::InvalidArgument, "final time must be >= 0", t_end);
  }
  if (!x0.allFinite()) {
    throw Error(ErrorCode::NonFiniteState, "initial state is not finite",
                std::nullopt, 0);
  }
  std::size_t steps = 0;
  if (t_end > 0) {
    steps = static_cast<std::size_t>(std::ceil(t_end / h * (1.0 - 1e-12)));
    steps = std::max<std::size_t>(steps, 1);
  }
  Trajectory traj;
  traj.step = steps == 0 ? h : t_end / static_cast<double>(steps);
  for (const auto& m : monitors) traj.channels.push_back({m.name, {}});
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  sample_monitors(traj, monitors, x0);

  const double dt = traj.step;
  Vector x = x0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const Vector k1 = field(x);
    const Vector k2 = field(x + 0.5 * dt * k1);
    const Vector k3 = field(x + 0.5 * dt * k2);
    const Vector k4 = field(x + dt * k3);
    const Vector next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) {
      throw Error(ErrorCode::NonFiniteState,
                  "state became non-finite at step " + std::to_string(k),
                  std::nullopt, k);
    }
    const double jump = (next - x).norm();
    if (jump > 10.0 * x.norm() + 10.0) {
      throw Error(ErrorCode::StepTooLarge,
                  "state jumped by " + format_double(jump) + " at step " +
                      std::to_string(k),
                  jump, k);
    }
    x = next;
    traj.times.push_back(k == steps ? t_end : static_cast<double>(k) * dt);
    traj.states.push_back(x);
    sample_monitors(traj, monitors, x);
  }
  return traj;
}

Trajectory brockett_flow(const LieAlgebra& alg, const Vector& n,
                         const Vector& l0, double h, double t_end,
                         BrockettRoute route) {
  require_dimension(static_cast<std::size_t>(n.size()), alg.dim(), "N");
  require_dimension(static_cast<std::size_t>(l0.size()), alg.dim(), "L0");
  const ScalarFunction g = killing_pairing(alg, n);
  VectorField field;
  if (route == BrockettRoute::LieBracket) {
    (void)alg.killing_inverse();
    field = [alg, g](const Vector& l) -> Vector {
      return double_bracket_lie(alg, g, l);
    };
  } else {
    field = generalized_double_bracket_field(MetricField::killing(alg),
                                             lie_poisson(alg), g);
  }
  const Matrix k = alg.killing();
  const std::vector<Monitor> monitors = {
      {"G", [g](const Vector& l) { return g(l); }},
      {"C1", [k](const Vector& l) { return l.dot(k * l); }},
      {"field_norm", [field](const Vector& l) { return field(l).norm(); }},
  };
  return integrate(field, l0, h, t_end, monitors);
}

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Nondecreasing: return "nondecreasing";
    case Monotonicity::Nonincreasing: return "nonincreasing";
    case Monotonicity::Constant: return "constant";
    case Monotonicity::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

EquilibriumReport equilibrium_report(const LieAlgebra& alg, const Vector& n,
                                     const Trajectory& trajectory,
                                     double threshold, double step_tol) {
  if (trajectory.states.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  }
  EquilibriumReport r;
  r.final_bracket_norm = alg.bracket(trajectory.final_state(), n).norm();
  r.converged = r.final_bracket_norm <= threshold;
  r.ker_ad_n_dim = static_cast<std::size_t>(ad_kernel(alg, n).cols());

  // Along v_G, dG/dt = -dG^T D dG, and D = Pi^T k Pi has the sign of k.
  const Signature sig = alg.killing_signature();
  Monotonicity expected = Monotonicity::NotApplicable;
  if (sig.negative_definite()) expected = Monotonicity::Nondecreasing;
  if (sig.positive_definite()) expected = Monotonicity::Nonincreasing;

  const Vector kn = alg.killing() * n;
  bool constant = true;
  double worst = 0.0;
  double previous = trajectory.states.front().dot(kn);
  for (std::size_t i = 1; i < trajectory.states.size(); ++i) {
    const double current = trajectory.states[i].dot(kn);
    const double delta = current - previous;
    if (std::abs(delta) > step_tol) constant = false;
    if (expected == Monotonicity::Nondecreasing) worst = std::max(worst, -delta);
    if (expected == Monotonicity::Nonincreasing) worst = std::max(worst, delta);
    previous = current;
  }
  if (expected == Monotonicity::NotApplicable) {
    r.direction = Monotonicity::NotApplicable;
    return r;
  }
  r.direction = constant ? Monotonicity::Constant : expected;
  r.worst_violation = worst;
  r.g_monotone = worst <= step_tol;
  return r;
}

double channel_drift(const Trajectory& trajectory, const std::string& name) {
  const auto& values = trajectory.channel(name);
  double drift = 0.0;
  for (double v : values) drift = std::max(drift, std::abs(v - values.front()));
  return drift;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          std::span<const std::string> channels,
                          std::size_t every) {
  if (every == 0) every = 1;
  const std::size_t n =
      trajectory.states.empty() ? 0 : static_cast<std::size_t>(trajectory.states[0].size());
  std::vector<const std::vector<double>*> columns;
  out << 't';
  for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
  for (const auto& name : channels) {
    columns.push_back(&trajectory.channel(name));
    out << ',' << name;
  }
  out << '\n';
  const std::size_t rows = trajectory.states.size();
  for (std::size_t r = 0; r < rows; ++r) {
    if (r % every != 0 && r + 1 != rows) continue;
    out << format_double(trajectory.times[r]);
    for (Eigen::Index i = 0; i < trajectory.states[r].size(); ++i) {
      out << ',' << format_double(trajectory.states[r][i]);
    }
    for (const auto* col : columns) out << ',' << format_double((*col)[r]);
    out << '\n';
  }
}

}  // namespace dbracket
