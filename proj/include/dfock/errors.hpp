#pragma once

#include <stdexcept>
#include <string>

namespace dfock {

enum class ErrorKind {
  InvalidArgument,
  NonIntegrableSingularity,
  NegativeLaplacian,
  MassNeverReachesOne,
  DivisionByZeroMass,
  InsufficientSamples,
  PairOutsideDisk,
  DomainTooSmall,
  EmptyGrid,
  ExponentTooSmall,
  IllConditionedFit,
  InvalidRadius,
  MeasureTargetInfeasible,
  HypothesisUnsatisfied,
  NonRadialWeight,
  QuadratureUnderResolved,
  CoveringWeightMismatch,
  InvalidLevel,
  ConfigParseError,
  UnknownWeight,
  RegionParseError,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace dfock
