#include "dbracket/numerics.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dbracket {

namespace {

double fd_base_step() {
  static const double step = std::cbrt(std::numeric_limits<double>::epsilon());
  return step;
}

// Nearest step to h for which xi + h is exact.
double representable_step(double xi, double h) {
  const double shifted = xi + h;
  return shifted - xi;
}

}  // namespace

Signature signature_of(const Matrix& symmetric, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric,
                                               Eigen::EigenvaluesOnly);
  const Vector& ev = solver.eigenvalues();
  const double scale = ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
  Signature sig;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (scale == 0.0 || std::abs(ev[i]) <= rel_tol * scale) {
      ++sig.zero;
    } else if (ev[i] > 0) {
      ++sig.plus;
    } else {
      ++sig.minus;
    }
  }
  return sig;
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double antisymmetry_defect(const Matrix& m) {
  return max_abs(m + m.transpose());
}

double symmetry_defect(const Matrix& m) { return max_abs(m - m.transpose()); }

std::size_t numeric_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * s[0]) ++rank;
  }
  return rank;
}

Matrix kernel_basis(const Matrix& m, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const std::size_t rank = numeric_rank(m, rel_tol);
  const Eigen::Index cols = m.cols();
  return svd.matrixV().rightCols(cols - static_cast<Eigen::Index>(rank));
}

Matrix image_basis(const Matrix& m, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const std::size_t rank = numeric_rank(m, rel_tol);
  return svd.matrixU().leftCols(static_cast<Eigen::Index>(rank));
}

double scaled_determinant(const Matrix& m) {
  const double scale = max_abs(m);
  if (scale == 0.0) return 0.0;
  return (m / scale).determinant();
}

Vector fd_gradient(const std::function<double(const Vector&)>& f,
                   const Vector& x) {
  Vector grad(x.size());
  Vector probe = x;
  const double scale = fd_base_step() * (1.0 + x.norm());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = representable_step(x[i], scale);
    probe[i] = x[i] + 2 * h;
    const double f_p2 = f(probe);
    probe[i] = x[i] + h;
    const double f_p1 = f(probe);
    probe[i] = x[i] - h;
    const double f_m1 = f(probe);
    probe[i] = x[i] - 2 * h;
    const double f_m2 = f(probe);
    probe[i] = x[i];
    grad[i] = (-f_p2 + 8 * f_p1 - 8 * f_m1 + f_m2) / (12 * h);
  }
  return grad;
}

Matrix fd_jacobian(const VectorField& f, const Vector& x) {
  const Vector f0 = f(x);
  Matrix jac(f0.size(), x.size());
  Vector probe = x;
  const double scale = fd_base_step() * (1.0 + x.norm());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = representable_step(x[i], scale);
    probe[i] = x[i] + 2 * h;
    const Vector f_p2 = f(probe);
    probe[i] = x[i] + h;
    const Vector f_p1 = f(probe);
    probe[i] = x[i] - h;
    const Vector f_m1 = f(probe);
    probe[i] = x[i] - 2 * h;
    const Vector f_m2 = f(probe);
    probe[i] = x[i];
    jac.col(i) = (-f_p2 + 8 * f_p1 - 8 * f_m1 + f_m2) / (12 * h);
  }
  return jac;
}

Vector central_gradient(const std::function<double(const Vector&)>& f,
                        const Vector& x, double step) {
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double f_p = f(probe);
    probe[i] = x[i] - step;
    const double f_m = f(probe);
    probe[i] = x[i];
    grad[i] = (f_p - f_m) / (2 * step);
  }
  return grad;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

std::string format_double(double x) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, result.ptr);
}

}  // namespace dbracket
