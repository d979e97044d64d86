#pragma once

#include <stdexcept>
#include <string>

namespace hyperlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A GraphPoint refers to an edge that does not exist or has t outside [0,1].
class InvalidPointError : public Error {
 public:
  using Error::Error;
};

/// The empty set was passed where a non-empty compact set is required.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation was applied to a space or map of the wrong kind.
class TypeError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperlab
