#include "dfock/errors.hpp"

namespace dfock {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonIntegrableSingularity: return "NonIntegrableSingularity";
    case ErrorKind::NegativeLaplacian: return "NegativeLaplacian";
    case ErrorKind::MassNeverReachesOne: return "MassNeverReachesOne";
    case ErrorKind::DivisionByZeroMass: return "DivisionByZeroMass";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::PairOutsideDisk: return "PairOutsideDisk";
    case ErrorKind::DomainTooSmall: return "DomainTooSmall";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::ExponentTooSmall: return "ExponentTooSmall";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::InvalidRadius: return "InvalidRadius";
    case ErrorKind::MeasureTargetInfeasible: return "MeasureTargetInfeasible";
    case ErrorKind::HypothesisUnsatisfied: return "HypothesisUnsatisfied";
    case ErrorKind::NonRadialWeight: return "NonRadialWeight";
    case ErrorKind::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorKind::CoveringWeightMismatch: return "CoveringWeightMismatch";
    case ErrorKind::InvalidLevel: return "InvalidLevel";
    case ErrorKind::ConfigParseError: return "ConfigParseError";
    case ErrorKind::UnknownWeight: return "UnknownWeight";
    case ErrorKind::RegionParseError: return "RegionParseError";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace dfock
