#include "dbracket/algebra.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "dbracket/error.hpp"

namespace dbracket {

namespace {

constexpr double kJacobiTolerance = 1e-12;
constexpr double kKillingDeterminantFloor = 1e-10;
constexpr double kBasisChangeDeterminantFloor = 1e-12;
constexpr double kClosureTolerance = 1e-10;

std::size_t idx(std::size_t n, std::size_t k, std::size_t i, std::size_t j) {
  return (k * n + i) * n + j;
}

Matrix killing_from_constants(std::size_t n, std::span<const double> c) {
  // tr(ad_a ad_b) = sum_{k,j} C^k_{aj} C^j_{bk}
  Matrix k = Matrix::Zero(static_cast<Eigen::Index>(n),
                          static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      double s = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
          s += c[idx(n, p, a, q)] * c[idx(n, q, b, p)];
        }
      }
      k(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
      k(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = s;
    }
  }
  return k;
}

}  // namespace

double jacobi_residual(std::size_t n, std::span<const double> c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t m = 0; m < n; ++m) {
          double s = 0.0;
          for (std::size_t k = 0; k < n; ++k) {
            s += c[idx(n, k, i, j)] * c[idx(n, m, k, l)] +
                 c[idx(n, k, j, l)] * c[idx(n, m, k, i)] +
                 c[idx(n, k, l, i)] * c[idx(n, m, k, j)];
          }
          worst = std::max(worst, std::abs(s));
        }
      }
    }
  }
  return worst;
}

LieAlgebra build_algebra(std::size_t dim, std::span<const double> constants) {
  if (dim == 0) {
    throw Error(ErrorCode::InvalidArgument, "algebra dimension must be >= 1");
  }
  require_dimension(constants.size(), dim * dim * dim, "structure constant array");
  double max_c = 0.0;
  for (double v : constants) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "non-finite structure constant");
    }
    max_c = std::max(max_c, std::abs(v));
  }
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i; j < dim; ++j) {
        const double cij = constants[idx(dim, k, i, j)];
        const double cji = constants[idx(dim, k, j, i)];
        if (cij != -cji) {
          throw Error(ErrorCode::AntisymmetryViolation,
                      "C^" + std::to_string(k + 1) + "_{" +
                          std::to_string(i + 1) + std::to_string(j + 1) +
                          "} != -C^" + std::to_string(k + 1) + "_{" +
                          std::to_string(j + 1) + std::to_string(i + 1) + "}",
                      cij + cji);
        }
      }
    }
  }

  const double residual = jacobi_residual(dim, constants);
  const double tol = kJacobiTolerance * (1.0 + max_c) * (1.0 + max_c);
  if (residual > tol) {
    // Report the first offending quadruple.
    const std::size_t n = dim;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t m = 0; m < n; ++m) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
              s += constants[idx(n, k, i, j)] * constants[idx(n, m, k, l)] +
                   constants[idx(n, k, j, l)] * constants[idx(n, m, k, i)] +
                   constants[idx(n, k, l, i)] * constants[idx(n, m, k, j)];
            }
            if (std::abs(s) > tol) {
              throw Error(ErrorCode::JacobiViolation,
                          "Jacobi identity fails at (i,j,l,m) = (" +
                              std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + "," +
                              std::to_string(l + 1) + "," +
                              std::to_string(m + 1) + ")",
                          residual);
            }
          }
  }

  LieAlgebra alg;
  alg.dim_ = dim;
  alg.constants_.assign(constants.begin(), constants.end());
  alg.max_abs_constant_ = max_c;
  alg.jacobi_residual_ = residual;
  alg.killing_ = killing_from_constants(dim, constants);
  alg.killing_signature_ = signature_of(alg.killing_);
  if (std::abs(scaled_determinant(alg.killing_)) >= kKillingDeterminantFloor) {
    alg.killing_inverse_ = alg.killing_.inverse();
  }
  return alg;
}

const Matrix& LieAlgebra::killing_inverse() const {
  if (!killing_inverse_) {
    throw Error(ErrorCode::DegenerateKilling,
                "Killing form is degenerate (algebra is not semisimple)",
                scaled_determinant(killing_));
  }
  return *killing_inverse_;
}

Vector LieAlgebra::bracket(const Vector& x, const Vector& y) const {
  require_dimension(static_cast<std::size_t>(x.size()), dim_, "bracket argument");
  require_dimension(static_cast<std::size_t>(y.size()), dim_, "bracket argument");
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < dim_; ++i) {
    const double xi = x[static_cast<Eigen::Index>(i)];
    const double yi = y[static_cast<Eigen::Index>(i)];
    for (std::size_t j = i + 1; j < dim_; ++j) {
      const double w = xi * y[static_cast<Eigen::Index>(j)] -
                       x[static_cast<Eigen::Index>(j)] * yi;
      if (w == 0.0) continue;
      for (std::size_t k = 0; k < dim_; ++k) {
        out[static_cast<Eigen::Index>(k)] += constants_[idx(dim_, k, i, j)] * w;
      }
    }
  }
  return out;
}

Matrix LieAlgebra::ad(const Vector& x) const {
  require_dimension(static_cast<std::size_t>(x.size()), dim_, "ad argument");
  const auto n = static_cast<Eigen::Index>(dim_);
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < dim_; ++k) {
    for (std::size_t j = 0; j < dim_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        s += constants_[idx(dim_, k, i, j)] * x[static_cast<Eigen::Index>(i)];
      }
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = s;
    }
  }
  return a;
}

LieAlgebra change_basis(const LieAlgebra& alg, const Matrix& p) {
  const std::size_t n = alg.dim();
  require_dimension(static_cast<std::size_t>(p.rows()), n, "basis change rows");
  require_dimension(static_cast<std::size_t>(p.cols()), n, "basis change columns");
  const double det = p.determinant();
  if (!(std::abs(det) > kBasisChangeDeterminantFloor)) {
    throw Error(ErrorCode::SingularBasisChange, "basis change matrix is singular",
                det);
  }
  const Matrix p_inv = p.inverse();
  std::vector<double> c(n * n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const Vector v = p_inv * alg.bracket(p.col(static_cast<Eigen::Index>(a)),
                                           p.col(static_cast<Eigen::Index>(b)));
      for (std::size_t k = 0; k < n; ++k) {
        c[idx(n, k, a, b)] = v[static_cast<Eigen::Index>(k)];
        c[idx(n, k, b, a)] = -v[static_cast<Eigen::Index>(k)];
      }
    }
  }
  return build_algebra(n, c);
}

LieAlgebra matrix_basis_import(std::span<const Matrix> basis) {
  if (basis.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty matrix basis");
  }
  const Eigen::Index m = basis.front().rows();
  const std::size_t n = basis.size();
  Matrix stacked(m * m, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (basis[i].rows() != m || basis[i].cols() != m) {
      throw Error(ErrorCode::DimensionMismatch,
                  "basis matrices must all be square of the same size");
    }
    stacked.col(static_cast<Eigen::Index>(i)) =
        basis[i].reshaped(m * m, 1);
  }
  if (numeric_rank(stacked) < n) {
    throw Error(ErrorCode::LinearlyDependentBasis,
                "basis matrices are linearly dependent");
  }
  const Eigen::ColPivHouseholderQR<Matrix> qr(stacked);
  std::vector<double> c(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Matrix comm = basis[i] * basis[j] - basis[j] * basis[i];
      const Vector target = comm.reshaped(m * m, 1);
      const Vector coeff = qr.solve(target);
      const double residual = (stacked * coeff - target).norm();
      if (residual > kClosureTolerance * (1.0 + target.norm())) {
        throw Error(ErrorCode::NotClosedUnderBracket,
                    "commutator of basis elements " + std::to_string(i + 1) +
                        " and " + std::to_string(j + 1) +
                        " leaves the span",
                    residual);
      }
      for (std::size_t k = 0; k < n; ++k) {
        c[idx(n, k, i, j)] = coeff[static_cast<Eigen::Index>(k)];
        c[idx(n, k, j, i)] = -coeff[static_cast<Eigen::Index>(k)];
      }
    }
  }
  return build_algebra(n, c);
}

ScalarFunction killing_pairing(const LieAlgebra& alg, const Vector& n) {
  require_dimension(static_cast<std::size_t>(n.size()), alg.dim(), "N");
  return ScalarFunction::linear(alg.killing() * n).renamed("k(x,N)");
}

Matrix ad_kernel(const LieAlgebra& alg, const Vector& l, double rel_tol) {
  return kernel_basis(alg.ad(l), rel_tol);
}

Matrix ad_image(const LieAlgebra& alg, const Vector& l, double rel_tol) {
  return image_basis(alg.ad(l), rel_tol);
}

LieAlgebra read_structure_constants(std::istream& in) {
  std::size_t dim = 0;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    const auto where = " on line " + std::to_string(line_no);
    if (first == "dim") {
      if (!(ls >> dim) || dim == 0) {
        throw Error(ErrorCode::ParseError, "bad dim" + where);
      }
      continue;
    }
    if (dim == 0) {
      throw Error(ErrorCode::ParseError, "'dim n' must precede entries" + where);
    }
    std::size_t i = 0, j = 0, k = 0;
    double value = 0.0;
    try {
      i = std::stoul(first);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad index" + where);
    }
    if (!(ls >> j >> k >> value)) {
      throw Error(ErrorCode::ParseError, "expected 'i j k value'" + where);
    }
    if (i < 1 || j < 1 || k < 1 || i > dim || j > dim || k > dim) {
      throw Error(ErrorCode::ParseError, "index out of range" + where);
    }
    entries[{i - 1, j - 1, k - 1}] = value;
  }
  if (dim == 0) throw Error(ErrorCode::ParseError, "missing 'dim n' line");
  std::vector<double> c(dim * dim * dim, 0.0);
  for (const auto& [key, value] : entries) {
    const auto [i, j, k] = key;
    c[idx(dim, k, i, j)] = value;
    if (!entries.contains({j, i, k})) c[idx(dim, k, j, i)] = -value;
  }
  return build_algebra(dim, c);
}

void write_structure_constants(std::ostream& out, const LieAlgebra& alg) {
  const std::size_t n = alg.dim();
  out << "# structure constants C^k_ij as 'i j k value' (1-based)\n";
  out << "dim " << n << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double v = alg.constant(k, i, j);
        if (v != 0.0) {
          out << i + 1 << ' ' << j + 1 << ' ' << k + 1 << ' '
              << format_double(v) << '\n';
        }
      }
    }
  }
}

namespace algebras {

namespace {

LieAlgebra from_brackets(
    std::size_t n,
    std::initializer_list<std::tuple<std::size_t, std::size_t, std::size_t, double>>
        brackets) {
  std::vector<double> c(n * n * n, 0.0);
  for (const auto& [i, j, k, v] : brackets) {
    c[idx(n, k, i, j)] = v;
    c[idx(n, k, j, i)] = -v;
  }
  return build_algebra(n, c);
}

}  // namespace

LieAlgebra sl2_standard() {
  // [e1,e2] = e3, [e1,e3] = -2 e1, [e2,e3] = 2 e2
  return from_brackets(3, {{0, 1, 2, 1.0}, {0, 2, 0, -2.0}, {1, 2, 1, 2.0}});
}

LieAlgebra sl2_hyperbolic() {
  // [e_x,e_y] = -e_z/sqrt2, [e_x,e_z] = -e_y/sqrt2, [e_y,e_z] = e_x/sqrt2
  const double s = 1.0 / std::sqrt(2.0);
  return from_brackets(3, {{0, 1, 2, -s}, {0, 2, 1, -s}, {1, 2, 0, s}});
}

LieAlgebra so3() {
  return from_brackets(3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}});
}

LieAlgebra so(std::size_t n) {
  const auto mats = so_matrices(n);
  return matrix_basis_import(mats);
}

LieAlgebra abelian(std::size_t n) {
  return build_algebra(n, std::vector<double>(n * n * n, 0.0));
}

std::vector<Matrix> sl2_standard_matrices() {
  Matrix e1 = Matrix::Zero(2, 2), e2 = Matrix::Zero(2, 2), e3 = Matrix::Zero(2, 2);
  e1(0, 1) = 1.0;
  e2(1, 0) = 1.0;
  e3(0, 0) = 1.0;
  e3(1, 1) = -1.0;
  return {e1, e2, e3};
}

std::vector<Matrix> so3_matrices() {
  // (L_i)_{jk} = -eps_{ijk}
  std::vector<Matrix> mats(3, Matrix::Zero(3, 3));
  mats[0](1, 2) = -1.0;
  mats[0](2, 1) = 1.0;
  mats[1](0, 2) = 1.0;
  mats[1](2, 0) = -1.0;
  mats[2](0, 1) = -1.0;
  mats[2](1, 0) = 1.0;
  return mats;
}

std::vector<Matrix> so_matrices(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "so(n) needs n >= 2");
  std::vector<Matrix> mats;
  const auto m = static_cast<Eigen::Index>(n);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a + 1; b < m; ++b) {
      Matrix e = Matrix::Zero(m, m);
      e(a, b) = 1.0;
      e(b, a) = -1.0;
      mats.push_back(e);
    }
  }
  return mats;
}

}  // namespace algebras

}  // namespace dbracket
