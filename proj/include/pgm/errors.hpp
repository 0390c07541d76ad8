#pragma once

#include <stdexcept>
#include <string>

namespace pgm {

enum class ErrorKind {
  // validation failures (exit code 2)
  NotEtale,
  CommutationFailure,
  DeltaOrderFailure,
  NotContinuous,
  NotACocycle,
  NotBlockTriangular,
  NotALift,
  NotMaximallyNonsplit,
  NoMatch,
  // certificate failures (exit code 3)
  CertificateFailure,
  // budget / precision (exit code 4)
  BoundExceeded,
  StabilizationBudgetExceeded,
  InsufficientPrecision,
  // malformed input (exit code 5)
  Malformed,
  NotLocal,
  NotAssociative,
  NotCommutative,
  NonUnit,
  NonUnitLeading,
  ZeroInput,
  EmptyWindow,
  BadInnerValuation,
  Unsupported,
};

const char* error_kind_name(ErrorKind k);
int exit_code_for(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace pgm
