#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dbracket/functions.hpp"
#include "dbracket/numerics.hpp"
#include "dbracket/types.hpp"

namespace dbracket {

/// Finite-dimensional real Lie algebra given by structure constants
/// [e_i, e_j] = sum_k C^k_{ij} e_k.
///
/// Constants are stored densely at index (k * n + i) * n + j. Instances are
/// immutable; the Killing matrix k_{ij} = tr(ad_{e_i} ad_{e_j}) and the Jacobi
/// residual are computed once at construction.
class LieAlgebra {
 public:
  std::size_t dim() const { return dim_; }

  double constant(std::size_t k, std::size_t i, std::size_t j) const {
    return constants_[(k * dim_ + i) * dim_ + j];
  }
  std::span<const double> constants() const { return constants_; }
  double max_abs_constant() const { return max_abs_constant_; }

  Vector bracket(const Vector& x, const Vector& y) const;
  /// (ad_X)^k_j = sum_i C^k_{ij} X^i, so ad(X) * Y == bracket(X, Y).
  Matrix ad(const Vector& x) const;

  const Matrix& killing() const { return killing_; }
  double killing_form(const Vector& x, const Vector& y) const {
    return x.dot(killing_ * y);
  }
  Signature killing_signature() const { return killing_signature_; }

  /// Nondegenerate Killing form (|det| >= 1e-10 after scaling).
  bool is_semisimple() const { return killing_inverse_.has_value(); }
  /// Negative definite Killing form.
  bool is_compact() const { return killing_signature_.negative_definite(); }
  /// Throws DegenerateKilling when the algebra is not semisimple.
  const Matrix& killing_inverse() const;

  double jacobi_residual() const { return jacobi_residual_; }

 private:
  friend LieAlgebra build_algebra(std::size_t, std::span<const double>);

  LieAlgebra() = default;

  std::size_t dim_ = 0;
  std::vector<double> constants_;
  double max_abs_constant_ = 0.0;
  Matrix killing_;
  Signature killing_signature_;
  std::optional<Matrix> killing_inverse_;
  double jacobi_residual_ = 0.0;
};

/// Validates antisymmetry (exact) and the Jacobi identity (residual at most
/// 1e-12 * (1 + max|C|)^2), then caches the Killing matrix.
LieAlgebra build_algebra(std::size_t dim, std::span<const double> constants);

/// Jacobi residual of a raw constant array (max over index quadruples).
double jacobi_residual(std::size_t dim, std::span<const double> constants);

/// Re-expresses the algebra in the basis e'_j = sum_i P^i_j e_i (columns of P
/// are the new basis vectors in old coordinates).
LieAlgebra change_basis(const LieAlgebra& alg, const Matrix& basis_change);

/// Solves [B_i, B_j] = sum_k C^k_{ij} B_k for a basis of m x m matrices.
LieAlgebra matrix_basis_import(std::span<const Matrix> basis);

/// k(x, N) as a scalar function of x.
ScalarFunction killing_pairing(const LieAlgebra& alg, const Vector& n);

/// Orthonormal bases of ker ad_L and Im ad_L.
Matrix ad_kernel(const LieAlgebra& alg, const Vector& l,
                 double rel_tol = kRankTolerance);
Matrix ad_image(const LieAlgebra& alg, const Vector& l,
                double rel_tol = kRankTolerance);

/// Text format: optional `#` comments, a `dim n` line, then one
/// `i j k value` line per constant C^k_{ij} (1-based). Missing (j, i, k)
/// partners are filled by antisymmetry. The writer emits i < j entries only.
LieAlgebra read_structure_constants(std::istream& in);
void write_structure_constants(std::ostream& out, const LieAlgebra& alg);

namespace algebras {

/// sl(2,R) in the basis e1 = [[0,1],[0,0]], e2 = [[0,0],[1,0]],
/// e3 = [[1,0],[0,-1]].
LieAlgebra sl2_standard();
/// sl(2,R) in the basis e_x = (e1+e2)/(2 sqrt 2), e_y = e3/(2 sqrt 2),
/// e_z = (e1-e2)/(2 sqrt 2), where the Killing form is diag(1, 1, -1).
LieAlgebra sl2_hyperbolic();
/// so(3) with [e_i, e_j] = eps_{ijk} e_k.
LieAlgebra so3();
/// so(n) in the basis E_ab - E_ba, a < b, ordered lexicographically.
LieAlgebra so(std::size_t n);
LieAlgebra abelian(std::size_t n);

std::vector<Matrix> sl2_standard_matrices();
std::vector<Matrix> so3_matrices();
std::vector<Matrix> so_matrices(std::size_t n);

}  // namespace algebras

}  // namespace dbracket
