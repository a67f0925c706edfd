#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pidlab {

enum class ErrorCode {
  InvalidArgument,
  NegativeMass,
  NotNormalized,
  UnknownVariable,
  OverlappingGroups,
  ShapeMismatch,
  PairingIncomplete,
  TooLarge,
  BracketFailure,
  InfeasibleSupport,
  InconsistentConstraints,
  MaxIterExceeded,
  InconsistentAnchor,
  ZeroProbabilityOutcome,
  NotFullSupport,
  DeltaOutOfRange,
  ParameterOutOfRange,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library is reported through this one type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pidlab
