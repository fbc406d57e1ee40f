#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dbracket {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  AntisymmetryViolation,
  JacobiViolation,
  SingularBasisChange,
  NotClosedUnderBracket,
  LinearlyDependentBasis,
  DegenerateKilling,
  InvalidMetric,
  NotCasimir,
  OutsideChartDomain,
  DegenerateInducedMetric,
  NonInvertibleLeafBivector,
  NotCompact,
  NotTangent,
  NonFiniteState,
  StepTooLarge,
  ParseError,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Library exception. `value()` carries the offending number when there is one
/// (a determinant, a residual); `index()` carries a step or grid index.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<double> value = std::nullopt,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> value() const noexcept { return value_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<double> value_;
  std::optional<std::size_t> index_;
};

void require_dimension(std::size_t actual, std::size_t expected,
                       std::string_view what);

}  // namespace dbracket
