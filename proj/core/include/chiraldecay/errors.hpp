#pragma once

#include <stdexcept>
#include <string>

namespace chiraldecay {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Physics / precondition failures (CLI exit code 3).
struct OutOfBandError : Error {
  using Error::Error;
};
struct MultipleRootsError : Error {
  using Error::Error;
};
struct DuplicateSiteError : Error {
  using Error::Error;
};
struct InvalidChainError : Error {
  using Error::Error;
};
struct DimensionMismatchError : Error {
  using Error::Error;
};
struct TooLargeError : Error {
  using Error::Error;
};
struct NoGapError : Error {
  using Error::Error;
};
struct TruncationError : Error {
  using Error::Error;
};
struct BoundaryReachedError : Error {
  using Error::Error;
};
struct WraparoundError : Error {
  using Error::Error;
};

// Numerical failures (CLI exit code 2).
struct NonSquareError : Error {
  using Error::Error;
};
struct OverflowError : Error {
  using Error::Error;
};
struct NoConvergenceError : Error {
  using Error::Error;
};
struct NumericalFailureError : Error {
  using Error::Error;
};
struct QuadratureDivergenceError : Error {
  using Error::Error;
};

}  // namespace chiraldecay
