#pragma once

#include <stdexcept>
#include <string>

namespace lmprim {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in spaces of different dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that was required to be in GL(V) is singular.
class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(const std::string& what = "matrix is singular: not in GL(V)")
      : Error(what) {}
};

/// An enumeration or table would exceed a configured size cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an algorithm does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (permutation, matrix, subspace, manifest files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An internal self-check failed. Never expected in a correct build.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace lmprim
