#pragma once

#include <stdexcept>
#include <string>

namespace isocat {

// Exit-code families used by the command line driver:
//   0 computed verdict (including not-wa / unknown), 2 precondition or schema
//   violation, 3 precision exhausted, 4 iteration budget exhausted.
enum class ErrorCode : int {
  Precondition = 2,
  Precision = 3,
  NoConvergence = 4,
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
};

#define ISOCAT_ERROR(NAME, CODE)                                         \
  struct NAME : Error {                                                  \
    explicit NAME(const std::string& what) : Error(ErrorCode::CODE, std::string(#NAME ": ") + what) {} \
  }

ISOCAT_ERROR(PrecisionExhausted, Precision);
ISOCAT_ERROR(WindowOverflow, Precision);
ISOCAT_ERROR(NotUnramified, Precondition);
ISOCAT_ERROR(InvertNonUnit, Precondition);
ISOCAT_ERROR(UnsplitCoefficientField, Precondition);
ISOCAT_ERROR(NonGenericFrobenius, Precondition);
ISOCAT_ERROR(CancellationAmbiguity, Precondition);
ISOCAT_ERROR(DomainViolation, Precondition);
ISOCAT_ERROR(NotMinuscule, Precondition);
ISOCAT_ERROR(NotWeaklyAdmissible, Precondition);
ISOCAT_ERROR(NonUnitDenominator, Precondition);
ISOCAT_ERROR(TooManyDimensions, Precondition);
ISOCAT_ERROR(PreconditionViolated, Precondition);
ISOCAT_ERROR(SchemaError, Precondition);
ISOCAT_ERROR(NoConvergence, NoConvergence);
// Raised when an internal consistency check that is guaranteed by theory
// fails; always indicates a bug, never bad input.
ISOCAT_ERROR(WeakAdmissibilityPostconditionFailed, Precondition);

#undef ISOCAT_ERROR

}  // namespace isocat
