#pragma once

#include <cstddef>
#include <vector>

#include "dbracket/functions.hpp"
#include "dbracket/types.hpp"

namespace dbracket {

struct Monomial {
  double coefficient = 0.0;
  std::vector<int> powers;  // one nonnegative exponent per variable
};

/// Real polynomial in n variables with exact gradient.
class Polynomial {
 public:
  Polynomial(std::size_t dim, std::vector<Monomial> terms);

  static Polynomial zero(std::size_t dim) { return {dim, {}}; }

  std::size_t dim() const { return dim_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  double evaluate(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  ScalarFunction as_function() const;

 private:
  std::size_t dim_;
  std::vector<Monomial> terms_;
};

}  // namespace dbracket
