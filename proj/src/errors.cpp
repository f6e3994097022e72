#include "memtaxis/errors.hpp"

namespace memtaxis {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteDerivative: return "NonFiniteDerivative";
    case ErrorCode::NotOneRootCase: return "NotOneRootCase";
    case ErrorCode::ArccosDomain: return "ArccosDomain";
    case ErrorCode::SinSignViolation: return "SinSignViolation";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::C0Violation: return "C0Violation";
    case ErrorCode::SingularEigenvector: return "SingularEigenvector";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::PositivityLoss: return "PositivityLoss";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::VerdictFailure: return "VerdictFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ConfigError:
    case ErrorCode::InsufficientData:
    case ErrorCode::VerdictFailure:
      return false;
    default:
      return true;
  }
}

}  // namespace memtaxis
