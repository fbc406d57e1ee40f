#include "dbracket/poisson.hpp"

#include <cmath>
#include <utility>

#include "dbracket/error.hpp"
#include "dbracket/numerics.hpp"

namespace dbracket {

namespace {

constexpr double kAntisymmetryTolerance = 1e-14;
constexpr double kCasimirTolerance = 1e-10;

}  // namespace

PoissonStructure::PoissonStructure(std::size_t dim, MatrixField bivector,
                                   PoissonKind kind)
    : dim_(dim), bivector_(std::move(bivector)), kind_(kind) {}

Matrix PoissonStructure::at(const Vector& x) const {
  require_dimension(static_cast<std::size_t>(x.size()), dim_, "point");
  Matrix pi = bivector_(x);
  require_dimension(static_cast<std::size_t>(pi.rows()), dim_, "bivector rows");
  require_dimension(static_cast<std::size_t>(pi.cols()), dim_, "bivector cols");
  const double defect = antisymmetry_defect(pi);
  if (defect > kAntisymmetryTolerance * std::max(1.0, max_abs(pi))) {
    throw Error(ErrorCode::AntisymmetryViolation,
                "bivector is not antisymmetric at the evaluated point", defect);
  }
  return pi;
}

double PoissonStructure::bracket(const ScalarFunction& f,
                                 const ScalarFunction& g,
                                 const Vector& x) const {
  const Matrix pi = at(x);
  const Vector df = f.gradient(x);
  const Vector dg = g.gradient(x);
  double s = 0.0;
  for (Eigen::Index i = 0; i < pi.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < pi.cols(); ++j) {
      s += pi(i, j) * (df[i] * dg[j] - df[j] * dg[i]);
    }
  }
  return s;
}

PoissonStructure PoissonStructure::with_casimir(
    ScalarFunction casimir, std::span<const Vector> sample_points) const {
  for (const auto& x : sample_points) {
    const double r = (at(x) * casimir.gradient(x)).norm();
    if (r > kCasimirTolerance * (1.0 + x.squaredNorm())) {
      throw Error(ErrorCode::NotCasimir,
                  "function '" + casimir.name() +
                      "' is not a Casimir of this structure",
                  r);
    }
  }
  PoissonStructure copy = *this;
  if (casimir.name().empty()) {
    casimir = casimir.renamed("C" + std::to_string(casimirs_.size() + 1));
  }
  copy.casimirs_.push_back(std::move(casimir));
  return copy;
}

PoissonStructure PoissonStructure::scaled(double factor) const {
  PoissonStructure copy = *this;
  copy.bivector_ = [inner = bivector_, factor](const Vector& x) -> Matrix {
    return factor * inner(x);
  };
  return copy;
}

PoissonStructure lie_poisson(const LieAlgebra& alg) {
  const Matrix& k_inv = alg.killing_inverse();
  const std::size_t n = alg.dim();
  const auto ni = static_cast<Eigen::Index>(n);
  // Row (i, j) of `coeff` holds the linear form xi -> Pi^{ij}(xi), i < j.
  Matrix coeff(ni * ni, ni);
  coeff.setZero();
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index j = i + 1; j < ni; ++j) {
      const Vector w = alg.bracket(k_inv.col(i), k_inv.col(j));
      coeff.row(i * ni + j) = (alg.killing() * w).transpose();
    }
  }
  MatrixField field = [coeff, ni](const Vector& xi) -> Matrix {
    Matrix pi = Matrix::Zero(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
      for (Eigen::Index j = i + 1; j < ni; ++j) {
        const double v = coeff.row(i * ni + j).dot(xi);
        pi(i, j) = v;
        pi(j, i) = -v;
      }
    }
    return pi;
  };
  PoissonStructure p(n, std::move(field), PoissonKind::LiePoisson);
  p.algebra_ = std::make_shared<const LieAlgebra>(alg);
  p.casimirs_.push_back(
      ScalarFunction::quadratic(alg.killing()).renamed("k(x,x)"));
  return p;
}

PoissonStructure constant_poisson(const Matrix& bivector) {
  if (bivector.rows() != bivector.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "bivector must be square");
  }
  const double defect = antisymmetry_defect(bivector);
  if (defect > kAntisymmetryTolerance * std::max(1.0, max_abs(bivector))) {
    throw Error(ErrorCode::AntisymmetryViolation,
                "constant bivector is not antisymmetric", defect);
  }
  Matrix pi = bivector;
  for (Eigen::Index i = 0; i < pi.rows(); ++i) {
    pi(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < pi.cols(); ++j) pi(j, i) = -pi(i, j);
  }
  return PoissonStructure(
      static_cast<std::size_t>(pi.rows()),
      [pi](const Vector&) -> Matrix { return pi; }, PoissonKind::Constant);
}

PoissonStructure canonical_poisson(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix pi = Matrix::Zero(2 * m, 2 * m);
  pi.topRightCorner(m, m) = Matrix::Identity(m, m);
  pi.bottomLeftCorner(m, m) = -Matrix::Identity(m, m);
  return constant_poisson(pi);
}

PoissonStructure polynomial_poisson(std::size_t dim,
                                    std::vector<BivectorEntry> upper_entries) {
  for (const auto& e : upper_entries) {
    if (e.row >= e.col || e.col >= dim) {
      throw Error(ErrorCode::InvalidArgument,
                  "bivector entries must be given for row < col < dim");
    }
    require_dimension(e.value.dim(), dim, "bivector entry polynomial");
  }
  const auto n = static_cast<Eigen::Index>(dim);
  return PoissonStructure(
      dim,
      [entries = std::move(upper_entries), n](const Vector& x) -> Matrix {
        Matrix pi = Matrix::Zero(n, n);
        for (const auto& e : entries) {
          const auto r = static_cast<Eigen::Index>(e.row);
          const auto c = static_cast<Eigen::Index>(e.col);
          pi(r, c) += e.value.evaluate(x);
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          for (Eigen::Index j = i + 1; j < n; ++j) pi(j, i) = -pi(i, j);
        }
        return pi;
      },
      PoissonKind::Custom);
}

VectorField hamiltonian_field(const PoissonStructure& p, ScalarFunction h) {
  return [p, h = std::move(h)](const Vector& x) -> Vector {
    return p.at(x) * h.gradient(x);
  };
}

double casimir_residual(const PoissonStructure& p, const ScalarFunction& c,
                        std::span<const Vector> points) {
  double worst = 0.0;
  for (const auto& x : points) {
    worst = std::max(worst, (p.at(x) * c.gradient(x)).norm());
  }
  return worst;
}

double jacobi_residual(const PoissonStructure& p, const Vector& x,
                       const ScalarFunction& f, const ScalarFunction& g,
                       const ScalarFunction& h, double fd_step) {
  if (!(fd_step >= 1e-7 && fd_step <= 1e-3)) {
    throw Error(ErrorCode::InvalidArgument,
                "finite-difference step must lie in [1e-7, 1e-3]", fd_step);
  }
  auto outer = [&](const ScalarFunction& a, const ScalarFunction& b,
                   const ScalarFunction& c) {
    const auto inner = [&](const Vector& y) { return p.bracket(b, c, y); };
    return a.gradient(x).dot(p.at(x) * central_gradient(inner, x, fd_step));
  };
  return std::abs(outer(f, g, h) + outer(g, h, f) + outer(h, f, g));
}

}  // namespace dbracket
