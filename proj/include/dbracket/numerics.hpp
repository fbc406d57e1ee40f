#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "dbracket/types.hpp"

namespace dbracket {

/// Default relative singular-value cutoff for rank decisions.
inline constexpr double kRankTolerance = 1e-10;

/// Counts of positive, negative and (numerically) zero eigenvalues of a
/// symmetric matrix.
struct Signature {
  int plus = 0;
  int minus = 0;
  int zero = 0;

  bool positive_definite() const { return minus == 0 && zero == 0 && plus > 0; }
  bool negative_definite() const { return plus == 0 && zero == 0 && minus > 0; }
  bool definite() const { return positive_definite() || negative_definite(); }
  bool nondegenerate() const { return zero == 0; }

  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature signature_of(const Matrix& symmetric, double rel_tol = 1e-12);

double max_abs(const Matrix& m);

/// |A + A^T| entrywise maximum.
double antisymmetry_defect(const Matrix& m);
double symmetry_defect(const Matrix& m);

std::size_t numeric_rank(const Matrix& m, double rel_tol = kRankTolerance);

/// Orthonormal (Euclidean) bases of ker M and Im M, one vector per column,
/// from the SVD with cutoff rel_tol * sigma_max.
Matrix kernel_basis(const Matrix& m, double rel_tol = kRankTolerance);
Matrix image_basis(const Matrix& m, double rel_tol = kRankTolerance);

/// Determinant of m / max|m|, so the test against a threshold is scale free.
/// Returns 0 for the zero matrix.
double scaled_determinant(const Matrix& m);

/// Fourth-order central finite differences. Every coordinate uses the step
/// eps^(1/3) * (1 + |x|), adjusted so that x_i + h is exact.
Vector fd_gradient(const std::function<double(const Vector&)>& f,
                   const Vector& x);
Matrix fd_jacobian(const VectorField& f, const Vector& x);

/// Second-order central difference gradient with a fixed step.
Vector central_gradient(const std::function<double(const Vector&)>& f,
                        const Vector& x, double step);

bool all_finite(const Vector& v);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

}  // namespace dbracket
