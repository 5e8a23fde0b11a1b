#pragma once

#include <stdexcept>
#include <string>

namespace cayley {

enum class ErrorCode {
  InvalidArgument = 1,
  Unsupported,
  PlanarInfeasible,
  CoincidentAtoms,
  DimensionMismatch,
  TooLarge,
  ConvergenceFailure,
  StepControlFailure,
  PositivityViolation,
  NotNormalized,
  DoubleApplication,
  DegenerateTargets,
  Io,
  Config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cayley
