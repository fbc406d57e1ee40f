#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dbracket/algebra.hpp"
#include "dbracket/cometric.hpp"
#include "dbracket/error.hpp"
#include "dbracket/poisson.hpp"
#include "test_support.hpp"

using namespace dbracket;
using namespace dbracket::testing;

namespace {

Matrix sl2_d_closed_form(const Vector& p) {
  const double x = p[0], y = p[1], z = p[2];
  return 0.5 * mat({{-y * y + z * z, x * y, x * z},
                    {x * y, -x * x + z * z, y * z},
                    {x * z, y * z, x * x + y * y}});
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("co-metric on sl2") {
  const auto alg = algebras::sl2_hyperbolic();
  const auto g = MetricField::killing(alg);
  const auto p = lie_poisson(alg);
  CHECK(g.kind() == MetricKind::Killing);
  CHECK(g.signature() == Signature{2, 1, 0});
  std::mt19937_64 rng(kSeed);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = random_vector(rng, 3, -2, 2);
    CHECK(max_diff(cometric_D(g, p, x), sl2_d_closed_form(x)) <= 1e-12);
  }
  CHECK(max_diff(cometric_D(g, p, vec({0, 0, 1})),
                 Matrix(vec({0.5, 0.5, 0}).asDiagonal())) <= 1e-15);
}

TEST_CASE("co-metric of the zero bivector") {
  const auto p = constant_poisson(Matrix::Zero(3, 3));
  const auto g = MetricField::euclidean(3);
  CHECK(cometric_D(g, p, vec({1, 2, 3})).norm() == 0.0);
  const auto rank = kernel_rank_check(g, p, vec({1, 2, 3}));
  CHECK(rank.applicable);
  CHECK(rank.rank_pi == 0);
  CHECK(rank.rank_d == 0);
  CHECK(rank.equal);
}

TEST_CASE("kernel ranks") {
  const auto p = lie_poisson(algebras::so3());
  const auto g = MetricField::euclidean(3);
  for (const Vector& x : {vec({0, 0, 1}), vec({1, 2, 3})}) {
    const auto r = kernel_rank_check(g, p, x);
    CHECK(r.applicable);
    CHECK(r.rank_pi == 2);
    CHECK(r.rank_d == 2);
    CHECK(r.equal);
  }
  const auto sl2 = algebras::sl2_hyperbolic();
  const auto r = kernel_rank_check(MetricField::killing(sl2), lie_poisson(sl2), vec({1, 0, 2}));
  CHECK_FALSE(r.applicable);
}

TEST_CASE("generalized double bracket field examples") {
  const auto alg = algebras::sl2_hyperbolic();
  const auto g = MetricField::killing(alg);
  const auto p = lie_poisson(alg);
  const Vector pt = vec({1, 0, std::sqrt(2.0)});
  const Vector v = generalized_double_bracket(g, p, ScalarFunction::coordinate(2, 3), pt);
  CHECK(max_diff(v, -0.5 * vec({std::sqrt(2.0), 0, 1})) <= 1e-15);

  std::mt19937_64 rng(kSeed);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = random_vector(rng, 3, -2, 2);
    CHECK(generalized_double_bracket(g, p, p.casimirs().front(), x).norm() <= 1e-10);
  }

  const auto canon = canonical_poisson(1);
  const auto vq = generalized_double_bracket(MetricField::euclidean(2), canon,
                                             ScalarFunction::coordinate(0, 2), vec({0.3, -0.8}));
  CHECK(max_diff(vq, vec({-1, 0})) == 0.0);

  CHECK_THROWS_AS(generalized_double_bracket(MetricField::euclidean(2), p,
                                             ScalarFunction::coordinate(0, 3), pt),
                  Error);
}

TEST_CASE("double bracket on the Lie algebra") {
  const auto alg = algebras::so3();
  const Vector n = vec({0.2, -1.0, 0.5});
  const auto G = killing_pairing(alg, n);
  std::mt19937_64 rng(kSeed);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector xi = random_vector(rng, 3);
    CHECK(max_diff(double_bracket_lie(alg, G, xi), alg.bracket(xi, alg.bracket(xi, n))) <=
          1e-14);
  }
  CHECK(double_bracket_lie(alg, G, Vector::Zero(3)).norm() == 0.0);
  CHECK(code_of([&] {
          double_bracket_lie(algebras::abelian(3), ScalarFunction::coordinate(0, 3),
                             vec({1, 0, 0}));
        }) == ErrorCode::DegenerateKilling);
}

TEST_CASE("generalized double bracket reduces to the Lie double bracket") {
  std::mt19937_64 rng(kSeed);
  for (const auto& alg : {algebras::sl2_hyperbolic(), algebras::so3(), algebras::so(4)}) {
    const auto n = static_cast<Eigen::Index>(alg.dim());
    const auto g = MetricField::killing(alg);
    const auto p = lie_poisson(alg);
    for (int kind = 0; kind < 2; ++kind) {
      for (int trial = 0; trial < 100; ++trial) {
        const Vector xi = random_vector(rng, n);
        const ScalarFunction G = kind == 0
                                     ? ScalarFunction::linear(random_vector(rng, n))
                                     : ScalarFunction::quadratic(random_symmetric(rng, n));
        const Vector lhs = generalized_double_bracket(g, p, G, xi);
        const Vector rhs = double_bracket_lie(alg, G, xi);
        CHECK(max_diff(lhs, rhs) <= 1e-12);
      }
    }
  }
}

TEST_CASE("pairing, descent and tangency") {
  std::mt19937_64 rng(kSeed);
  const auto alg = algebras::so(4);
  const auto p = lie_poisson(alg);
  for (const auto& g : {MetricField::killing(alg), MetricField::euclidean(6),
                        MetricField::constant(random_spd(rng, 6))}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Vector x = random_vector(rng, 6);
      const auto F = ScalarFunction::linear(random_vector(rng, 6));
      const auto G = ScalarFunction::linear(random_vector(rng, 6));
      const Matrix d = cometric_D(g, p, x);
      const Vector xf = hamiltonian_field(p, F)(x);
      const Vector xg = hamiltonian_field(p, G)(x);
      const Matrix gx = g.at(x);
      CHECK(std::abs(F.gradient(x).dot(d * G.gradient(x)) - xf.dot(gx * xg)) <= 1e-12);
      CHECK(symmetry_defect(d) <= 1e-14 * (1 + max_abs(d)));

      const double descent = G.gradient(x).dot(generalized_double_bracket(g, p, G, x));
      CHECK(std::abs(descent + xg.dot(gx * xg)) <= 1e-12);
      if (g.positive_definite()) CHECK(descent <= 1e-15);

      for (const auto& c : p.casimirs())
        CHECK(std::abs(c.gradient(x).dot(generalized_double_bracket(g, p, G, x))) <= 1e-10);
    }
  }
}

TEST_CASE("kernel of the bivector lies in the kernel of D") {
  std::mt19937_64 rng(kSeed);
  const auto alg = algebras::so(4);
  const auto p = lie_poisson(alg);
  const auto g = MetricField::constant(random_spd(rng, 6));
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = random_vector(rng, 6);
    const Matrix d = cometric_D(g, p, x);
    const Matrix ker = kernel_basis(p.at(x));
    CHECK(max_abs(d * ker) <= 1e-10);
    const auto r = kernel_rank_check(g, p, x);
    CHECK(r.equal);
    CHECK(r.rank_pi == 4);
  }
}

TEST_CASE("metric validation") {
  CHECK(code_of([] { MetricField::constant(mat({{1, 0}, {0, 0}})); }) ==
        ErrorCode::InvalidMetric);
  CHECK(code_of([] { MetricField::constant(mat({{1, 2}, {0, 1}})); }) ==
        ErrorCode::InvalidMetric);
  CHECK(code_of([] { MetricField::killing(algebras::abelian(2)); }) ==
        ErrorCode::DegenerateKilling);

  const auto flip = MetricField::custom(
      1, [](const Vector& x) { return Matrix::Constant(1, 1, x[0]); }, vec({1.0}));
  CHECK(flip.positive_definite());
  CHECK(flip.at(vec({2.0}))(0, 0) == 2.0);
  CHECK(code_of([&] { (void)flip.at(vec({-1.0})); }) == ErrorCode::InvalidMetric);
  CHECK(code_of([&] { (void)flip.at(vec({0.0})); }) == ErrorCode::InvalidMetric);
  CHECK(MetricField::constant(mat({{2, 0}, {0, -3}})).signature() == Signature{1, 1, 0});
}
