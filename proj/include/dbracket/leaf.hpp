#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <string>

#include "dbracket/algebra.hpp"
#include "dbracket/cometric.hpp"
#include "dbracket/functions.hpp"
#include "dbracket/poisson.hpp"
#include "dbracket/types.hpp"

namespace dbracket {

/// Local chart of a symplectic leaf: a parametrization phi: R^d -> R^n together
/// with an ambient coordinate map F: R^n -> R^d satisfying F(phi(u)) = u.
/// Jacobians are analytic when supplied, otherwise fourth-order central
/// differences.
class LeafChart {
 public:
  using Sampler = std::function<Vector(std::mt19937_64&)>;

  struct Definition {
    std::string name;
    std::size_t ambient_dim = 0;
    std::size_t leaf_dim = 0;
    VectorField phi;
    VectorField coordinates;
    MatrixField jac_phi;          // optional
    MatrixField jac_coordinates;  // optional
    std::function<bool(const Vector&)> domain;  // optional, default: all of R^d
    Sampler sampler;  // draws well-conditioned interior points (optional)
  };

  explicit LeafChart(Definition def);

  const std::string& name() const { return def_.name; }
  std::size_t ambient_dim() const { return def_.ambient_dim; }
  std::size_t leaf_dim() const { return def_.leaf_dim; }

  bool in_domain(const Vector& u) const;
  /// Throws OutsideChartDomain.
  Vector phi(const Vector& u) const;
  Vector coordinates(const Vector& x) const;
  Matrix jac_phi(const Vector& u) const;
  Matrix jac_coordinates(const Vector& x) const;

  bool has_analytic_jacobians() const {
    return static_cast<bool>(def_.jac_phi) &&
           static_cast<bool>(def_.jac_coordinates);
  }
  LeafChart with_fd_jacobians() const;

  bool has_sampler() const { return static_cast<bool>(def_.sampler); }
  Vector sample(std::mt19937_64& rng) const;

 private:
  Definition def_;
};

struct LeafMetricReport {
  Matrix g_ind;         // induced metric
  Matrix omega;         // leaf symplectic form
  Matrix tau;           // double bracket metric
  Matrix d_restricted;  // co-metric D on the leaf covectors dF^a
};

/// jac_phi^T g(phi(u)) jac_phi. Throws DegenerateInducedMetric when
/// |det| < 1e-12 * max|g_ind|^d.
Matrix induced_metric(const MetricField& g, const LeafChart& chart,
                      const Vector& u);

/// jac_F Pi(phi(u)) jac_F^T
Matrix leaf_bivector(const PoissonStructure& p, const LeafChart& chart,
                     const Vector& u);

/// omega = (jac_F Pi jac_F^T)^{-1}; the Darboux block [[0, I], [-I, 0]]
/// maps to [[0, -I], [I, 0]]. Throws NonInvertibleLeafBivector.
Matrix leaf_symplectic(const PoissonStructure& p, const LeafChart& chart,
                       const Vector& u);

/// tau = omega^T g_ind^{-1} omega
Matrix double_bracket_metric(const MetricField& g, const PoissonStructure& p,
                             const LeafChart& chart, const Vector& u);

/// jac_F D(phi(u)) jac_F^T
Matrix restricted_D(const MetricField& g, const PoissonStructure& p,
                    const LeafChart& chart, const Vector& u);

LeafMetricReport leaf_metric_report(const MetricField& g,
                                    const PoissonStructure& p,
                                    const LeafChart& chart, const Vector& u);

/// tau^{-1} grad_u (G o phi)(u), in chart coordinates.
Vector leaf_gradient(const MetricField& g, const PoissonStructure& p,
                     const LeafChart& chart, const ScalarFunction& G,
                     const Vector& u);

/// |v_G(phi(u)) + jac_phi(u) leaf_gradient(u)|_2
double gradient_theorem_residual(const MetricField& g,
                                 const PoissonStructure& p,
                                 const LeafChart& chart,
                                 const ScalarFunction& G, const Vector& u);

/// max |J^T tau_2 J - tau_1| where J is the transition Jacobian d(F_2 o phi_1).
double chart_transition_defect(const MetricField& g, const PoissonStructure& p,
                               const LeafChart& first, const LeafChart& second,
                               const Vector& u_first);

/// Normal metric on an adjoint orbit of a compact algebra:
/// n([L,X], [L,Y]) = -k(X^L, Y^L), with X^L the -k-orthogonal projection of
/// X onto Im(ad_L). Throws NotCompact, NotTangent.
double normal_metric(const LieAlgebra& alg, const Vector& l, const Vector& v,
                     const Vector& w);

/// Normal metric in chart coordinates at phi(u).
Matrix normal_metric_matrix(const LieAlgebra& alg, const LeafChart& chart,
                            const Vector& u);

/// Ambient pushforward of the normal-metric gradient of H restricted to the
/// orbit: jac_phi n^{-1} jac_phi^T dH.
Vector normal_gradient(const LieAlgebra& alg, const LeafChart& chart,
                       const ScalarFunction& h, const Vector& u);

struct TauNormalReport {
  Matrix tau;
  Matrix n_matrix;
  double max_abs_sum = 0.0;  // max |tau + n|
};

/// Compares the double bracket metric (Killing metric, Lie-Poisson structure)
/// with the normal metric on a regular orbit of a compact algebra.
TauNormalReport tau_vs_normal_check(const LieAlgebra& alg,
                                    const LeafChart& chart, const Vector& u);

struct ChartDiagnostics {
  double roundtrip = 0.0;         // max |F(phi(u)) - u|
  double jacobian_identity = 0.0; // max |jac_F jac_phi - I|
  double casimir_variation = 0.0; // max |C(phi(u)) - C(phi(u_0))|
};

ChartDiagnostics check_chart(const LeafChart& chart,
                             std::span<const Vector> samples,
                             std::span<const ScalarFunction> casimirs);

}  // namespace dbracket
