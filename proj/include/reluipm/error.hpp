#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reluipm {

enum class ErrorCode {
  // numerics / estimators
  ZeroVector,
  Infeasible,
  DimensionMismatch,
  EmptySample,
  InvalidArgument,
  // balancing
  EmptyGroup,
  Separation,
  NonConvergence,
  HullViolation,
  // simulation
  DegenerateDraw,
  // fairness
  ScoreOutOfRange,
  // configuration and io
  ParseError,
  ValidationError,
  SchemaMismatch,
  NonBinaryTreatment,
  InvalidCell,
  EmptyFile,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Process exit code for an error: 2 config/validation, 3 data, 4 numerical.
int exit_code_for(ErrorCode code);

}  // namespace reluipm
