#include "dbracket/polynomial.hpp"

#include <cmath>
#include <utility>

#include "dbracket/error.hpp"

namespace dbracket {

namespace {

double ipow(double base, int exponent) {
  double result = 1.0;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace

Polynomial::Polynomial(std::size_t dim, std::vector<Monomial> terms)
    : dim_(dim), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    require_dimension(t.powers.size(), dim_, "monomial exponent list");
    for (int p : t.powers) {
      if (p < 0) {
        throw Error(ErrorCode::InvalidArgument,
                    "monomial exponents must be nonnegative");
      }
    }
    if (!std::isfinite(t.coefficient)) {
      throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
    }
  }
}

double Polynomial::evaluate(const Vector& x) const {
  require_dimension(static_cast<std::size_t>(x.size()), dim_, "point");
  double sum = 0.0;
  for (const auto& t : terms_) {
    double term = t.coefficient;
    for (std::size_t i = 0; i < dim_; ++i) {
      term *= ipow(x[static_cast<Eigen::Index>(i)], t.powers[i]);
    }
    sum += term;
  }
  return sum;
}

Vector Polynomial::gradient(const Vector& x) const {
  require_dimension(static_cast<std::size_t>(x.size()), dim_, "point");
  Vector grad = Vector::Zero(x.size());
  for (const auto& t : terms_) {
    for (std::size_t d = 0; d < dim_; ++d) {
      if (t.powers[d] == 0) continue;
      double term = t.coefficient * t.powers[d];
      for (std::size_t i = 0; i < dim_; ++i) {
        const int p = i == d ? t.powers[i] - 1 : t.powers[i];
        term *= ipow(x[static_cast<Eigen::Index>(i)], p);
      }
      grad[static_cast<Eigen::Index>(d)] += term;
    }
  }
  return grad;
}

ScalarFunction Polynomial::as_function() const {
  return ScalarFunction([p = *this](const Vector& x) { return p.evaluate(x); },
                        [p = *this](const Vector& x) { return p.gradient(x); },
                        "polynomial");
}

}  // namespace dbracket
