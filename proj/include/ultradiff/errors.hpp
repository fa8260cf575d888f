#pragma once

#include <stdexcept>
#include <string>

namespace ultradiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

// Raised when a truncated computation has no digits left to vouch for.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class BackendMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// The function is not defined at the requested point. Kept apart from
// PrecisionExhausted so probes can tell "undefined" from "gave up".
class DomainError : public Error {
 public:
  using Error::Error;
};

class ZeroIncrement : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

class IndeterminateRank : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace ultradiff
