#pragma once

#include <stdexcept>
#include <string>

namespace fpbasis {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of different dimension were combined.
class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t a, std::size_t b)
      : Error("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

/// An operation's precondition was violated (point outside its space,
/// support not on the required lattice, invalid basis index, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual or JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A state the algorithms guarantee cannot happen.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fpbasis
