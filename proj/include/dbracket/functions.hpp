#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "dbracket/types.hpp"

namespace dbracket {

/// A smooth scalar function on R^n with an optional analytic gradient.
/// Without one, `gradient` falls back to fourth-order finite differences.
class ScalarFunction {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  ScalarFunction() = default;
  ScalarFunction(ValueFn value, GradientFn gradient = {}, std::string name = {});

  double operator()(const Vector& x) const { return value_(x); }
  Vector gradient(const Vector& x) const;

  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }
  bool valid() const { return static_cast<bool>(value_); }
  const std::string& name() const { return name_; }

  ScalarFunction renamed(std::string name) const;
  /// Same values, gradient always by finite differences.
  ScalarFunction without_gradient() const;

  static ScalarFunction constant(double c);
  static ScalarFunction linear(Vector coefficients);
  /// x^T A x with A symmetrised.
  static ScalarFunction quadratic(const Matrix& form);
  static ScalarFunction coordinate(std::size_t index, std::size_t dim);

 private:
  ValueFn value_;
  GradientFn gradient_;
  std::string name_;
};

}  // namespace dbracket
