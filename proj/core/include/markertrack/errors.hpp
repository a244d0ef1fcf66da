#pragma once

#include <stdexcept>
#include <string>

namespace mtrack {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid parameter value (out-of-range window, nonpositive normalizer, ...).
struct ParameterError : Error {
  using Error::Error;
};

/// Mismatched or unusable image dimensions.
struct DimensionError : Error {
  using Error::Error;
};

/// File system and decode failures.
struct IoError : Error {
  using Error::Error;
};

/// A frame index missing from an otherwise contiguous sequence.
struct GapError : IoError {
  GapError(const std::string& msg, int index) : IoError(msg), missing_index(index) {}
  int missing_index;
};

/// Track initialization failures (bad click, ambiguous click).
struct InitError : Error {
  using Error::Error;
};

/// Too few observations or control points for a solve.
struct InsufficientDataError : Error {
  using Error::Error;
};

/// Rank-deficient or ill-conditioned geometry (coplanar points, parallel rays).
struct DegenerateGeometryError : Error {
  using Error::Error;
};

/// DLT projection with a vanishing denominator.
struct SingularProjectionError : Error {
  using Error::Error;
};

}  // namespace mtrack
