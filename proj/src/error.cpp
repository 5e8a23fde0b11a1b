#include "cayley/error.hpp"

namespace cayley {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::PlanarInfeasible: return "PlanarInfeasible";
    case ErrorCode::CoincidentAtoms: return "CoincidentAtoms";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::StepControlFailure: return "StepControlFailure";
    case ErrorCode::PositivityViolation: return "PositivityViolation";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DoubleApplication: return "DoubleApplication";
    case ErrorCode::DegenerateTargets: return "DegenerateTargets";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace cayley
