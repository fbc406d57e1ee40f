#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "dbracket/algebra.hpp"
#include "dbracket/functions.hpp"
#include "dbracket/polynomial.hpp"
#include "dbracket/types.hpp"

namespace dbracket {

enum class PoissonKind { LiePoisson, Constant, Custom };

/// Poisson bivector field on R^n with explicitly registered Casimirs.
///
/// Evaluation checks antisymmetry of the returned matrix. Registered Casimirs
/// are validated against |Pi(x) dC(x)| <= 1e-10 (1 + |x|^2) on the sample
/// points supplied at registration.
class PoissonStructure {
 public:
  PoissonStructure(std::size_t dim, MatrixField bivector, PoissonKind kind);

  std::size_t dim() const { return dim_; }
  PoissonKind kind() const { return kind_; }

  Matrix at(const Vector& x) const;
  Matrix operator()(const Vector& x) const { return at(x); }

  /// {f, g}(x) = df(x)^T Pi(x) dg(x)
  double bracket(const ScalarFunction& f, const ScalarFunction& g,
                 const Vector& x) const;

  const std::vector<ScalarFunction>& casimirs() const { return casimirs_; }
  PoissonStructure with_casimir(ScalarFunction casimir,
                                std::span<const Vector> sample_points) const;

  /// Multiplies the bivector by a constant. Casimirs stay Casimirs.
  PoissonStructure scaled(double factor) const;

  /// Source algebra for Lie-Poisson structures, null otherwise.
  const LieAlgebra* algebra() const { return algebra_.get(); }

 private:
  friend PoissonStructure lie_poisson(const LieAlgebra& alg);

  std::size_t dim_;
  MatrixField bivector_;
  PoissonKind kind_;
  std::vector<ScalarFunction> casimirs_;
  std::shared_ptr<const LieAlgebra> algebra_;
};

/// Pi^{ij}(xi) = k(xi, [grad xi^i, grad xi^j]) with grad xi^i = k^{i a} e_a.
/// Registers the quadratic Casimir k(xi, xi). Throws DegenerateKilling.
PoissonStructure lie_poisson(const LieAlgebra& alg);

/// Constant bivector, antisymmetric to 1e-14 relative (AntisymmetryViolation
/// otherwise); the lower triangle is rebuilt from the upper one.
PoissonStructure constant_poisson(const Matrix& bivector);
/// [[0, I_n], [-I_n, 0]] on R^{2n}.
PoissonStructure canonical_poisson(std::size_t n);

struct BivectorEntry {
  std::size_t row;  // 0-based, row < col
  std::size_t col;
  Polynomial value;
};
PoissonStructure polynomial_poisson(std::size_t dim,
                                    std::vector<BivectorEntry> upper_entries);

/// X_H(x) = Pi(x) dH(x)
VectorField hamiltonian_field(const PoissonStructure& p, ScalarFunction h);

/// max over points of |Pi(x) dC(x)|_2
double casimir_residual(const PoissonStructure& p, const ScalarFunction& c,
                        std::span<const Vector> points);

/// |{f,{g,h}} + {g,{h,f}} + {h,{f,g}}| at x, with the outer derivative of each
/// inner bracket taken by central differences of step fd_step in [1e-7, 1e-3].
double jacobi_residual(const PoissonStructure& p, const Vector& x,
                       const ScalarFunction& f, const ScalarFunction& g,
                       const ScalarFunction& h, double fd_step);

}  // namespace dbracket
