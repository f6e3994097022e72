#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace memtaxis {

enum class ErrorCode {
  InvalidArgument,
  NonFiniteDerivative,
  NotOneRootCase,
  ArccosDomain,
  SinSignViolation,
  ZeroDenominator,
  C0Violation,
  SingularEigenvector,
  SingularResolvent,
  PositivityLoss,
  NonFinite,
  InsufficientData,
  VerdictFailure,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code lets the
/// CLI map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for failures that indicate a numerical breakdown (singular systems,
/// positivity loss, out-of-domain formulas) rather than bad input.
bool is_numerical(ErrorCode code);

}  // namespace memtaxis
