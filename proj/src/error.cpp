#include "reluipm/error.hpp"

namespace reluipm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::Separation: return "Separation";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::HullViolation: return "HullViolation";
    case ErrorCode::DegenerateDraw: return "DegenerateDraw";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::NonBinaryTreatment: return "NonBinaryTreatment";
    case ErrorCode::InvalidCell: return "InvalidCell";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::Infeasible:
      return 2;
    case ErrorCode::Separation:
    case ErrorCode::NonConvergence:
    case ErrorCode::HullViolation:
    case ErrorCode::ZeroVector:
      return 4;
    default:
      return 3;
  }
}

}  // namespace reluipm
