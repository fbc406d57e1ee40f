#pragma once

#include <functional>

#include <Eigen/Dense>

namespace dbracket {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using VectorField = std::function<Vector(const Vector&)>;
using MatrixField = std::function<Matrix(const Vector&)>;

}  // namespace dbracket
