#pragma once

#include <stdexcept>
#include <string>

namespace gmi {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation that needs at least one observation was given n = 0.
class ZeroSample : public Error {
 public:
  using Error::Error;
};

/// Malformed counts input (non-integer, negative, ragged rows, empty grid).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure while reading or writing a table.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A distribution with no positive cell where positive mass is required.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Gradient requested on a table containing zero cells; restrict to the
/// observed support first.
class ZeroCellInSupport : public Error {
 public:
  using Error::Error;
};

/// The plug-in variance estimate is (numerically) zero, so no Z statistic
/// can be formed.
class DegenerateVariance : public Error {
 public:
  using Error::Error;
};

/// Fewer than two occupied rows or columns in the observed table.
class InsufficientSupport : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Degrees of freedom below one.
class InvalidDf : public Error {
 public:
  using Error::Error;
};

/// A provable internal invariant was violated; indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gmi
