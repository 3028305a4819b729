#pragma once

#include <stdexcept>
#include <string>

namespace pdtls {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the operands do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A Cholesky pivot was nonpositive, or an eigenvalue that must be positive was not.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

/// A full-rank method was handed a rank-deficient data matrix.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class SingularTriangularError : public Error {
 public:
  using Error::Error;
};

/// Input expected to be symmetric deviates beyond tolerance.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// The rank-deficient instance fails the consistency test; no SPD solution exists.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or non-finite input (files, flags, matrices).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdtls
