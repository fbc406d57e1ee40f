#include "dbracket/cometric.hpp"

#include <cmath>
#include <utility>

#include "dbracket/error.hpp"

namespace dbracket {

namespace {

constexpr double kSymmetryTolerance = 1e-14;
constexpr double kDeterminantFloor = 1e-12;

}  // namespace

MetricField::MetricField(std::size_t dim, MatrixField g, Signature sig,
                         MetricKind kind)
    : dim_(dim), g_(std::move(g)), signature_(sig), kind_(kind) {}

MetricField MetricField::constant(const Matrix& g) {
  if (g.rows() != g.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "metric matrix must be square");
  }
  if (symmetry_defect(g) > kSymmetryTolerance * std::max(1.0, max_abs(g))) {
    throw Error(ErrorCode::InvalidMetric, "metric matrix is not symmetric",
                symmetry_defect(g));
  }
  const Matrix sym = 0.5 * (g + g.transpose());
  const double det = sym.determinant();
  if (std::abs(det) < kDeterminantFloor) {
    throw Error(ErrorCode::InvalidMetric, "metric matrix is degenerate", det);
  }
  return MetricField(static_cast<std::size_t>(g.rows()),
                     [sym](const Vector&) -> Matrix { return sym; },
                     signature_of(sym), MetricKind::Constant);
}

MetricField MetricField::euclidean(std::size_t n) {
  MetricField m = constant(Matrix::Identity(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n)));
  m.kind_ = MetricKind::Euclidean;
  return m;
}

MetricField MetricField::killing(const LieAlgebra& alg) {
  if (!alg.is_semisimple()) {
    throw Error(ErrorCode::DegenerateKilling,
                "Killing form is degenerate and cannot serve as a metric");
  }
  MetricField m = constant(alg.killing());
  m.kind_ = MetricKind::Killing;
  return m;
}

MetricField MetricField::custom(std::size_t n, MatrixField g,
                                const Vector& reference_point) {
  const Matrix g0 = g(reference_point);
  MetricField m(n, std::move(g), signature_of(0.5 * (g0 + g0.transpose())),
                MetricKind::Custom);
  (void)m.at(reference_point);
  return m;
}

Matrix MetricField::at(const Vector& x) const {
  require_dimension(static_cast<std::size_t>(x.size()), dim_, "point");
  Matrix g = g_(x);
  require_dimension(static_cast<std::size_t>(g.rows()), dim_, "metric rows");
  require_dimension(static_cast<std::size_t>(g.cols()), dim_, "metric cols");
  if (kind_ == MetricKind::Custom) {
    const double defect = symmetry_defect(g);
    if (defect > kSymmetryTolerance * std::max(1.0, max_abs(g))) {
      throw Error(ErrorCode::InvalidMetric, "metric is not symmetric", defect);
    }
    g = 0.5 * (g + g.transpose());
    const double det = g.determinant();
    if (std::abs(det) < kDeterminantFloor) {
      throw Error(ErrorCode::InvalidMetric, "metric is degenerate", det);
    }
    if (!(signature_of(g) == signature_)) {
      throw Error(ErrorCode::InvalidMetric, "metric changes signature");
    }
  }
  return g;
}

Matrix cometric_D(const MetricField& g, const PoissonStructure& p,
                  const Vector& x) {
  require_dimension(p.dim(), g.dim(), "Poisson structure");
  const Matrix pi = p.at(x);
  const Matrix d = pi.transpose() * g.at(x) * pi;
  return 0.5 * (d + d.transpose());
}

Vector generalized_double_bracket(const MetricField& g,
                                  const PoissonStructure& p,
                                  const ScalarFunction& G, const Vector& x) {
  return -(cometric_D(g, p, x) * G.gradient(x));
}

VectorField generalized_double_bracket_field(MetricField g, PoissonStructure p,
                                             ScalarFunction G) {
  return [g = std::move(g), p = std::move(p),
          G = std::move(G)](const Vector& x) -> Vector {
    return generalized_double_bracket(g, p, G, x);
  };
}

Vector double_bracket_lie(const LieAlgebra& alg, const ScalarFunction& G,
                          const Vector& xi) {
  const Vector grad = alg.killing_inverse() * G.gradient(xi);
  return alg.bracket(xi, alg.bracket(xi, grad));
}

KernelRankReport kernel_rank_check(const MetricField& g,
                                   const PoissonStructure& p, const Vector& x,
                                   double rel_tol) {
  KernelRankReport report;
  if (!g.positive_definite()) return report;
  report.applicable = true;
  report.rank_pi = numeric_rank(p.at(x), rel_tol);
  report.rank_d = numeric_rank(cometric_D(g, p, x), rel_tol);
  report.equal = report.rank_pi == report.rank_d;
  return report;
}

}  // namespace dbracket
