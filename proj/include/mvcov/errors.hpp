#pragma once

#include <stdexcept>
#include <string>

namespace mvcov {

// Root of the toolkit error hierarchy.  Callers that only care about the
// broad category catch ValidationError (bad input / violated precondition)
// or NumericalError (well-formed input, numerically unsolvable problem).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

struct ValidationError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "ValidationError"; }
};

struct NumericalError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "NumericalError"; }
};

#define MVCOV_DEFINE_ERROR(NAME, BASE)                          \
  struct NAME : BASE {                                          \
    using BASE::BASE;                                           \
    const char* kind() const noexcept override { return #NAME; } \
  }

// Input / precondition failures.
MVCOV_DEFINE_ERROR(BehindCamera, ValidationError);
MVCOV_DEFINE_ERROR(DegenerateDirection, ValidationError);
MVCOV_DEFINE_ERROR(LimitModeHasNoCovariance, ValidationError);
MVCOV_DEFINE_ERROR(InsufficientObservations, ValidationError);
MVCOV_DEFINE_ERROR(NotEnoughCameras, ValidationError);
MVCOV_DEFINE_ERROR(NoVisiblePair, ValidationError);

// Numerical failures.
MVCOV_DEFINE_ERROR(SingularCovariance, NumericalError);
MVCOV_DEFINE_ERROR(SingularInformation, NumericalError);
MVCOV_DEFINE_ERROR(DegenerateSection, NumericalError);
MVCOV_DEFINE_ERROR(DegenerateGeometry, NumericalError);
MVCOV_DEFINE_ERROR(TooFewValidTrials, NumericalError);
MVCOV_DEFINE_ERROR(ZeroTheory, NumericalError);

#undef MVCOV_DEFINE_ERROR

}  // namespace mvcov
