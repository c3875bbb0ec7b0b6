#pragma once

#include <stdexcept>
#include <string>

namespace teichflow {

/// Base class for every error raised by the library. The CLI maps
/// ConfigError to exit code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand outside the mathematical domain of an operation
/// (zero divisor, non-positive log/sqrt argument, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Root bracket without a certified sign change.
class NoSignChange : public Error {
 public:
  using Error::Error;
};

/// An enclosure is too wide to decide a sign or meet a width target.
class InsufficientPrecision : public Error {
 public:
  using Error::Error;
};

/// Flow time below the threshold above which convergents are the shortest vectors.
class BelowThreshold : public Error {
 public:
  using Error::Error;
};

/// Interval comparison could not be decided even after refinement.
class AmbiguousAtPrecision : public Error {
 public:
  using Error::Error;
};

/// The brute-force search would need a window larger than its cap.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// Operation requested on inputs outside the enumerated cases.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration (slope pattern, rational, CLI flag, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace teichflow
