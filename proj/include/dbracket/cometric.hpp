#pragma once

#include <cstddef>

#include "dbracket/algebra.hpp"
#include "dbracket/functions.hpp"
#include "dbracket/numerics.hpp"
#include "dbracket/poisson.hpp"
#include "dbracket/types.hpp"

namespace dbracket {

enum class MetricKind { Constant, Killing, Euclidean, Custom };

/// Symmetric nondegenerate (pseudo-)Riemannian metric field on R^n.
/// The signature is fixed at construction; `at` rejects points where the
/// matrix is not symmetric, degenerate, or of a different signature.
class MetricField {
 public:
  static MetricField constant(const Matrix& g);
  static MetricField euclidean(std::size_t n);
  static MetricField killing(const LieAlgebra& alg);
  /// Signature is read off at `reference_point`.
  static MetricField custom(std::size_t n, MatrixField g,
                            const Vector& reference_point);

  std::size_t dim() const { return dim_; }
  MetricKind kind() const { return kind_; }
  const Signature& signature() const { return signature_; }
  bool positive_definite() const { return signature_.positive_definite(); }

  Matrix at(const Vector& x) const;

 private:
  MetricField(std::size_t dim, MatrixField g, Signature sig, MetricKind kind);

  std::size_t dim_;
  MatrixField g_;
  Signature signature_;
  MetricKind kind_;
};

/// D(x) = Pi(x)^T g(x) Pi(x), symmetrised.
Matrix cometric_D(const MetricField& g, const PoissonStructure& p,
                  const Vector& x);

/// v_G(x) = -D(x) dG(x)
Vector generalized_double_bracket(const MetricField& g,
                                  const PoissonStructure& p,
                                  const ScalarFunction& G, const Vector& x);
VectorField generalized_double_bracket_field(MetricField g, PoissonStructure p,
                                             ScalarFunction G);

/// [xi, [xi, grad G(xi)]] with grad G = k^{-1} dG. Throws DegenerateKilling.
Vector double_bracket_lie(const LieAlgebra& alg, const ScalarFunction& G,
                          const Vector& xi);

struct KernelRankReport {
  bool applicable = false;  // false when g is not positive definite at x
  std::size_t rank_pi = 0;
  std::size_t rank_d = 0;
  bool equal = false;
};

KernelRankReport kernel_rank_check(const MetricField& g,
                                   const PoissonStructure& p, const Vector& x,
                                   double rel_tol = kRankTolerance);

}  // namespace dbracket
