#include "gsplit/errors.hpp"

namespace gsplit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadOrientation: return "BadOrientation";
    case ErrorCode::BadNode: return "BadNode";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NotSubgraph: return "NotSubgraph";
    case ErrorCode::BadSize: return "BadSize";
    case ErrorCode::BadFactor: return "BadFactor";
    case ErrorCode::ZeroNormal: return "ZeroNormal";
    case ErrorCode::SelfCheckFailed: return "SelfCheckFailed";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NotIsoAveraged: return "NotIsoAveraged";
    case ErrorCode::ExcludedInput: return "ExcludedInput";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace gsplit
