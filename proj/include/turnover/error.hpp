#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace turnover {

enum class ErrorKind {
  DeathRateOutOfRange,
  BirthNotExceedDeath,
  DimensionMismatch,
  NonpositiveKernelParam,
  IndexOutOfRange,
  NonFiniteState,
  TiedTurnover,
  NonpositiveBeta,
  NoTheta,
  KernelNotInvertible,
  KinkProximity,
  NonpositiveDenominator,
  NonpositiveComponent,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// NonFiniteState is a numerical failure; everything else is bad input.
  bool is_numerical() const noexcept { return kind_ == ErrorKind::NonFiniteState; }

 private:
  ErrorKind kind_;
};

}  // namespace turnover
