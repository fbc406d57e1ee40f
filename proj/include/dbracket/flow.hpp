#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dbracket/algebra.hpp"
#include "dbracket/types.hpp"

namespace dbracket {

struct Monitor {
  std::string name;
  std::function<double(const Vector&)> fn;
};

/// Fixed-step trajectory with monitor channels sampled at every state.
struct Trajectory {
  double step = 0.0;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<std::pair<std::string, std::vector<double>>> channels;

  std::size_t size() const { return states.size(); }
  const Vector& final_state() const { return states.back(); }
  /// Throws InvalidArgument for an unknown channel.
  const std::vector<double>& channel(const std::string& name) const;
  bool has_channel(const std::string& name) const;
};

/// Classical RK4 on [0, T]. The step actually used is T / ceil(T / h), so the
/// run ends exactly at T with a constant step no larger than h. T = 0 yields
/// the initial state alone.
///
/// Throws NonFiniteState or StepTooLarge (|x_{k+1} - x_k| > 10 |x_k| + 10),
/// both with the offending step index.
Trajectory integrate(const VectorField& field, const Vector& x0, double h,
                     double t_end, std::span<const Monitor> monitors = {});

enum class BrockettRoute { LieBracket, Cometric };

/// L' = [L, [L, N]]. Monitors: "G" = k(L, N), "C1" = k(L, L), "field_norm".
Trajectory brockett_flow(const LieAlgebra& alg, const Vector& n,
                         const Vector& l0, double h, double t_end,
                         BrockettRoute route = BrockettRoute::LieBracket);

enum class Monotonicity { Nondecreasing, Nonincreasing, Constant, NotApplicable };

std::string_view to_string(Monotonicity m);

struct EquilibriumReport {
  double final_bracket_norm = 0.0;  // |[L_final, N]|
  bool converged = false;           // final_bracket_norm <= threshold
  /// Expected direction of G = k(L, N) from the Killing signature.
  Monotonicity direction = Monotonicity::NotApplicable;
  /// Empty when the check does not apply (indefinite Killing form).
  std::optional<bool> g_monotone;
  double worst_violation = 0.0;  // largest step against the expected direction
  std::size_t ker_ad_n_dim = 0;  // regularity diagnostic for N
};

inline constexpr double kEquilibriumThreshold = 1e-6;
inline constexpr double kMonotoneStepTolerance = 1e-10;

EquilibriumReport equilibrium_report(const LieAlgebra& alg, const Vector& n,
                                     const Trajectory& trajectory,
                                     double threshold = kEquilibriumThreshold,
                                     double step_tol = kMonotoneStepTolerance);

/// Largest |c(t) - c(0)| over a channel.
double channel_drift(const Trajectory& trajectory, const std::string& name);

/// CSV with header `t,x1..xn,<channels>`; values in shortest round-trip form.
/// Writes every `every`-th row plus the final one.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          std::span<const std::string> channels,
                          std::size_t every = 1);

}  // namespace dbracket
