#pragma once

#include <stdexcept>
#include <string>

namespace utl {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A guarded denominator vanished or a sampled parameter point was rejected.
struct NonGenericError : Error {
  using Error::Error;
};

/// Malformed arguments, out-of-range indices, size or kind mismatches.
struct InvalidInput : Error {
  using Error::Error;
};

/// Request exceeds the supported size limits.
struct ResourceError : Error {
  using Error::Error;
};

/// A computed identity failed to hold.
struct VerificationFailure : Error {
  using Error::Error;
};

}  // namespace utl
