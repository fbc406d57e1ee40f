#include "dbracket/leaf.hpp"

#include <cmath>
#include <utility>

#include "dbracket/error.hpp"
#include "dbracket/numerics.hpp"

namespace dbracket {

namespace {

constexpr double kDegeneracyTolerance = 1e-12;
constexpr double kTangencyTolerance = 1e-8;

// |det m| < tol * max|m|^d, with the zero matrix always degenerate.
bool is_degenerate(const Matrix& m, double& det) {
  det = m.determinant();
  const double scale = max_abs(m);
  if (scale == 0.0) return true;
  return std::abs(det) < kDegeneracyTolerance * std::pow(scale, m.rows());
}

}  // namespace

LeafChart::LeafChart(Definition def) : def_(std::move(def)) {
  if (!def_.phi || !def_.coordinates) {
    throw Error(ErrorCode::InvalidArgument,
                "chart '" + def_.name + "' needs both phi and F");
  }
  if (def_.leaf_dim == 0 || def_.leaf_dim % 2 != 0 ||
      def_.leaf_dim > def_.ambient_dim) {
    throw Error(ErrorCode::InvalidArgument,
                "chart '" + def_.name +
                    "' must have even leaf dimension not above ambient");
  }
}

bool LeafChart::in_domain(const Vector& u) const {
  if (static_cast<std::size_t>(u.size()) != def_.leaf_dim) return false;
  if (!u.allFinite()) return false;
  return !def_.domain || def_.domain(u);
}

Vector LeafChart::phi(const Vector& u) const {
  require_dimension(static_cast<std::size_t>(u.size()), def_.leaf_dim,
                    "chart coordinates");
  if (!in_domain(u)) {
    throw Error(ErrorCode::OutsideChartDomain,
                "point outside the domain of chart '" + def_.name + "'");
  }
  return def_.phi(u);
}

Vector LeafChart::coordinates(const Vector& x) const {
  require_dimension(static_cast<std::size_t>(x.size()), def_.ambient_dim,
                    "ambient point");
  return def_.coordinates(x);
}

Matrix LeafChart::jac_phi(const Vector& u) const {
  if (!in_domain(u)) {
    throw Error(ErrorCode::OutsideChartDomain,
                "point outside the domain of chart '" + def_.name + "'");
  }
  if (def_.jac_phi) return def_.jac_phi(u);
  return fd_jacobian(def_.phi, u);
}

Matrix LeafChart::jac_coordinates(const Vector& x) const {
  require_dimension(static_cast<std::size_t>(x.size()), def_.ambient_dim,
                    "ambient point");
  if (def_.jac_coordinates) return def_.jac_coordinates(x);
  return fd_jacobian(def_.coordinates, x);
}

LeafChart LeafChart::with_fd_jacobians() const {
  Definition def = def_;
  def.jac_phi = {};
  def.jac_coordinates = {};
  def.name += " (fd)";
  return LeafChart(std::move(def));
}

Vector LeafChart::sample(std::mt19937_64& rng) const {
  if (!def_.sampler) {
    throw Error(ErrorCode::InvalidArgument,
                "chart '" + def_.name + "' has no sampler");
  }
  return def_.sampler(rng);
}

Matrix induced_metric(const MetricField& g, const LeafChart& chart,
                      const Vector& u) {
  require_dimension(g.dim(), chart.ambient_dim(), "metric");
  const Matrix j = chart.jac_phi(u);
  const Matrix g_ind = j.transpose() * g.at(chart.phi(u)) * j;
  double det = 0.0;
  if (is_degenerate(g_ind, det)) {
    throw Error(ErrorCode::DegenerateInducedMetric,
                "induced metric is degenerate on chart '" + chart.name() + "'",
                det);
  }
  return g_ind;
}

Matrix leaf_bivector(const PoissonStructure& p, const LeafChart& chart,
                     const Vector& u) {
  require_dimension(p.dim(), chart.ambient_dim(), "Poisson structure");
  const Vector x = chart.phi(u);
  const Matrix jf = chart.jac_coordinates(x);
  const Matrix pc = jf * p.at(x) * jf.transpose();
  // Antisymmetric by construction up to rounding; make it exact.
  return 0.5 * (pc - pc.transpose());
}

Matrix leaf_symplectic(const PoissonStructure& p, const LeafChart& chart,
                       const Vector& u) {
  const Matrix pc = leaf_bivector(p, chart, u);
  double det = 0.0;
  if (is_degenerate(pc, det)) {
    throw Error(ErrorCode::NonInvertibleLeafBivector,
                "Poisson bivector restricted to chart '" + chart.name() +
                    "' is not invertible",
                det);
  }
  const Matrix omega = pc.inverse();
  return 0.5 * (omega - omega.transpose());
}

namespace {

Matrix tau_from(const Matrix& g_ind, const Matrix& omega) {
  const Matrix inv = g_ind.inverse();
  return omega.transpose() * (0.5 * (inv + inv.transpose())) * omega;
}

}  // namespace

Matrix double_bracket_metric(const MetricField& g, const PoissonStructure& p,
                             const LeafChart& chart, const Vector& u) {
  const Matrix g_ind = induced_metric(g, chart, u);
  const Matrix omega = leaf_symplectic(p, chart, u);
  return tau_from(g_ind, omega);
}

Matrix restricted_D(const MetricField& g, const PoissonStructure& p,
                    const LeafChart& chart, const Vector& u) {
  require_dimension(p.dim(), chart.ambient_dim(), "Poisson structure");
  const Vector x = chart.phi(u);
  const Matrix jf = chart.jac_coordinates(x);
  return jf * cometric_D(g, p, x) * jf.transpose();
}

LeafMetricReport leaf_metric_report(const MetricField& g,
                                    const PoissonStructure& p,
                                    const LeafChart& chart, const Vector& u) {
  LeafMetricReport r;
  r.g_ind = induced_metric(g, chart, u);
  r.omega = leaf_symplectic(p, chart, u);
  r.tau = tau_from(r.g_ind, r.omega);
  r.d_restricted = restricted_D(g, p, chart, u);
  return r;
}

Vector leaf_gradient(const MetricField& g, const PoissonStructure& p,
                     const LeafChart& chart, const ScalarFunction& G,
                     const Vector& u) {
  const Matrix tau = double_bracket_metric(g, p, chart, u);
  const Vector dg_leaf =
      chart.jac_phi(u).transpose() * G.gradient(chart.phi(u));
  return tau.partialPivLu().solve(dg_leaf);
}

double gradient_theorem_residual(const MetricField& g,
                                 const PoissonStructure& p,
                                 const LeafChart& chart,
                                 const ScalarFunction& G, const Vector& u) {
  const Vector x = chart.phi(u);
  const Vector v = generalized_double_bracket(g, p, G, x);
  return (v + chart.jac_phi(u) * leaf_gradient(g, p, chart, G, u)).norm();
}

double chart_transition_defect(const MetricField& g, const PoissonStructure& p,
                               const LeafChart& first, const LeafChart& second,
                               const Vector& u_first) {
  const Vector x = first.phi(u_first);
  const Vector u_second = second.coordinates(x);
  const Matrix j = second.jac_coordinates(x) * first.jac_phi(u_first);
  const Matrix tau1 = double_bracket_metric(g, p, first, u_first);
  const Matrix tau2 = double_bracket_metric(g, p, second, u_second);
  return max_abs(j.transpose() * tau2 * j - tau1);
}

namespace {

// Solves ad_L X = v for each column of `tangents` and returns the -k
// orthogonal projections of the solutions onto Im(ad_L), one per column.
Matrix normal_components(const LieAlgebra& alg, const Vector& l,
                         const Matrix& tangents) {
  if (!alg.is_compact()) {
    throw Error(ErrorCode::NotCompact,
                "normal metric needs a negative definite Killing form");
  }
  const Matrix ad_l = alg.ad(l);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(ad_l);
  const Matrix image = image_basis(ad_l);
  const Matrix minus_k = -alg.killing();
  const Matrix gram = image.transpose() * minus_k * image;
  Matrix out(tangents.rows(), tangents.cols());
  for (Eigen::Index c = 0; c < tangents.cols(); ++c) {
    const Vector v = tangents.col(c);
    const Vector x = cod.solve(v);
    const double residual = (ad_l * x - v).norm();
    if (residual > kTangencyTolerance * std::max(1.0, v.norm())) {
      throw Error(ErrorCode::NotTangent,
                  "vector is not in Im(ad_L) (not tangent to the orbit)",
                  residual);
    }
    out.col(c) = image * gram.ldlt().solve(image.transpose() * minus_k * x);
  }
  return out;
}

}  // namespace

double normal_metric(const LieAlgebra& alg, const Vector& l, const Vector& v,
                     const Vector& w) {
  require_dimension(static_cast<std::size_t>(v.size()), alg.dim(), "v");
  require_dimension(static_cast<std::size_t>(w.size()), alg.dim(), "w");
  Matrix tangents(v.size(), 2);
  tangents.col(0) = v;
  tangents.col(1) = w;
  const Matrix xl = normal_components(alg, l, tangents);
  return -alg.killing_form(xl.col(0), xl.col(1));
}

Matrix normal_metric_matrix(const LieAlgebra& alg, const LeafChart& chart,
                            const Vector& u) {
  require_dimension(chart.ambient_dim(), alg.dim(), "chart ambient space");
  const Matrix xl = normal_components(alg, chart.phi(u), chart.jac_phi(u));
  return -(xl.transpose() * alg.killing() * xl);
}

Vector normal_gradient(const LieAlgebra& alg, const LeafChart& chart,
                       const ScalarFunction& h, const Vector& u) {
  const Matrix n = normal_metric_matrix(alg, chart, u);
  const Matrix j = chart.jac_phi(u);
  return j * n.ldlt().solve(j.transpose() * h.gradient(chart.phi(u)));
}

TauNormalReport tau_vs_normal_check(const LieAlgebra& alg,
                                    const LeafChart& chart, const Vector& u) {
  const MetricField g = MetricField::killing(alg);
  const PoissonStructure p = lie_poisson(alg);
  TauNormalReport r;
  r.tau = double_bracket_metric(g, p, chart, u);
  r.n_matrix = normal_metric_matrix(alg, chart, u);
  r.max_abs_sum = max_abs(r.tau + r.n_matrix);
  return r;
}

ChartDiagnostics check_chart(const LeafChart& chart,
                             std::span<const Vector> samples,
                             std::span<const ScalarFunction> casimirs) {
  ChartDiagnostics d;
  if (samples.empty()) return d;
  const auto dim = static_cast<Eigen::Index>(chart.leaf_dim());
  const Vector x0 = chart.phi(samples.front());
  for (const auto& u : samples) {
    const Vector x = chart.phi(u);
    d.roundtrip = std::max(d.roundtrip, (chart.coordinates(x) - u).cwiseAbs().maxCoeff());
    const Matrix id = chart.jac_coordinates(x) * chart.jac_phi(u);
    d.jacobian_identity =
        std::max(d.jacobian_identity, max_abs(id - Matrix::Identity(dim, dim)));
    for (const auto& c : casimirs) {
      d.casimir_variation = std::max(d.casimir_variation, std::abs(c(x) - c(x0)));
    }
  }
  return d;
}

}  // namespace dbracket
