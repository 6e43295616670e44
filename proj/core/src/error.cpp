#include "jumplmi/error.hpp"

namespace jumplmi {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::MissingRegularizer: return "MissingRegularizer";
    case ErrorCode::NoUniqueMinimizer: return "NoUniqueMinimizer";
    case ErrorCode::StepsizeOutOfRange: return "StepsizeOutOfRange";
    case ErrorCode::BOutOfRange: return "BOutOfRange";
    case ErrorCode::BigDataConditionViolated: return "BigDataConditionViolated";
    case ErrorCode::PivotSignViolation: return "PivotSignViolation";
    case ErrorCode::InfeasibleClass: return "InfeasibleClass";
    case ErrorCode::DegenerateTrace: return "DegenerateTrace";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace jumplmi
