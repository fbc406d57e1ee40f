#include "dbracket/error.hpp"

namespace dbracket {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AntisymmetryViolation: return "AntisymmetryViolation";
    case ErrorCode::JacobiViolation: return "JacobiViolation";
    case ErrorCode::SingularBasisChange: return "SingularBasisChange";
    case ErrorCode::NotClosedUnderBracket: return "NotClosedUnderBracket";
    case ErrorCode::LinearlyDependentBasis: return "LinearlyDependentBasis";
    case ErrorCode::DegenerateKilling: return "DegenerateKilling";
    case ErrorCode::InvalidMetric: return "InvalidMetric";
    case ErrorCode::NotCasimir: return "NotCasimir";
    case ErrorCode::OutsideChartDomain: return "OutsideChartDomain";
    case ErrorCode::DegenerateInducedMetric: return "DegenerateInducedMetric";
    case ErrorCode::NonInvertibleLeafBivector: return "NonInvertibleLeafBivector";
    case ErrorCode::NotCompact: return "NotCompact";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<double> value, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      value_(value),
      index_(index) {}

void require_dimension(std::size_t actual, std::size_t expected,
                       std::string_view what) {
  if (actual != expected) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has dimension " + std::to_string(actual) +
                    ", expected " + std::to_string(expected));
  }
}

}  // namespace dbracket
