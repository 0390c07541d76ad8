#include "pgm/errors.hpp"

namespace pgm {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotEtale: return "NotEtale";
    case ErrorKind::CommutationFailure: return "CommutationFailure";
    case ErrorKind::DeltaOrderFailure: return "DeltaOrderFailure";
    case ErrorKind::NotContinuous: return "NotContinuous";
    case ErrorKind::NotACocycle: return "NotACocycle";
    case ErrorKind::NotBlockTriangular: return "NotBlockTriangular";
    case ErrorKind::NotALift: return "NotALift";
    case ErrorKind::NotMaximallyNonsplit: return "NotMaximallyNonsplit";
    case ErrorKind::NoMatch: return "NoMatch";
    case ErrorKind::CertificateFailure: return "CertificateFailure";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::StabilizationBudgetExceeded: return "StabilizationBudgetExceeded";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::Malformed: return "Malformed";
    case ErrorKind::NotLocal: return "NotLocal";
    case ErrorKind::NotAssociative: return "NotAssociative";
    case ErrorKind::NotCommutative: return "NotCommutative";
    case ErrorKind::NonUnit: return "NonUnit";
    case ErrorKind::NonUnitLeading: return "NonUnitLeading";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::BadInnerValuation: return "BadInnerValuation";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotEtale:
    case ErrorKind::CommutationFailure:
    case ErrorKind::DeltaOrderFailure:
    case ErrorKind::NotContinuous:
    case ErrorKind::NotACocycle:
    case ErrorKind::NotBlockTriangular:
    case ErrorKind::NotALift:
    case ErrorKind::NotMaximallyNonsplit:
    case ErrorKind::NoMatch:
      return 2;
    case ErrorKind::CertificateFailure:
      return 3;
    case ErrorKind::BoundExceeded:
    case ErrorKind::StabilizationBudgetExceeded:
    case ErrorKind::InsufficientPrecision:
      return 4;
    default:
      return 5;
  }
}

}  // namespace pgm
