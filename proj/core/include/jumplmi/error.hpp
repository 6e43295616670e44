#pragma once

#include <stdexcept>
#include <string>

namespace jumplmi {

enum class ErrorCode {
  InvalidArgument,
  InvalidMatrix,
  DimensionMismatch,
  SingularBlock,
  MissingRegularizer,
  NoUniqueMinimizer,
  StepsizeOutOfRange,
  BOutOfRange,
  BigDataConditionViolated,
  PivotSignViolation,
  InfeasibleClass,
  DegenerateTrace,
  Unsupported,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jumplmi
