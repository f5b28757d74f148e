#pragma once

#include <stdexcept>
#include <string>

namespace wmopt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: T out of range, wrong key set kind, m = 0 where a message is required.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Enumeration or LP size above the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A document or input that parses but breaks a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

class UnsupportedParameterError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace wmopt
