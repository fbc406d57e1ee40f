#include "dbracket/functions.hpp"

#include <utility>

#include "dbracket/error.hpp"
#include "dbracket/numerics.hpp"

namespace dbracket {

ScalarFunction::ScalarFunction(ValueFn value, GradientFn gradient,
                               std::string name)
    : value_(std::move(value)),
      gradient_(std::move(gradient)),
      name_(std::move(name)) {}

Vector ScalarFunction::gradient(const Vector& x) const {
  if (gradient_) return gradient_(x);
  return fd_gradient(value_, x);
}

ScalarFunction ScalarFunction::renamed(std::string name) const {
  ScalarFunction copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

ScalarFunction ScalarFunction::without_gradient() const {
  return ScalarFunction(value_, {}, name_);
}

ScalarFunction ScalarFunction::constant(double c) {
  return ScalarFunction([c](const Vector&) { return c; },
                        [](const Vector& x) -> Vector {
                          return Vector::Zero(x.size());
                        },
                        "constant");
}

ScalarFunction ScalarFunction::linear(Vector coefficients) {
  return ScalarFunction(
      [c = coefficients](const Vector& x) {
        require_dimension(static_cast<std::size_t>(x.size()),
                          static_cast<std::size_t>(c.size()), "point");
        return c.dot(x);
      },
      [c = coefficients](const Vector&) -> Vector { return c; }, "linear");
}

ScalarFunction ScalarFunction::quadratic(const Matrix& form) {
  const Matrix sym = 0.5 * (form + form.transpose());
  return ScalarFunction(
      [sym](const Vector& x) {
        require_dimension(static_cast<std::size_t>(x.size()),
                          static_cast<std::size_t>(sym.rows()), "point");
        return x.dot(sym * x);
      },
      [sym](const Vector& x) -> Vector { return 2.0 * sym * x; },
      "quadratic");
}

ScalarFunction ScalarFunction::coordinate(std::size_t index, std::size_t dim) {
  Vector c = Vector::Zero(static_cast<Eigen::Index>(dim));
  c[static_cast<Eigen::Index>(index)] = 1.0;
  return linear(c).renamed("x" + std::to_string(index + 1));
}

}  // namespace dbracket
