#pragma once

#include <stdexcept>
#include <string>

namespace nlpl {

// Base of every error the library throws. The CLI maps ConfigError to exit
// status 2, IoError to 4 and everything else to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {  // argument outside the mathematical domain
 public:
  using Error::Error;
};

class RangeError : public Error {  // tabulated data queried outside its range
 public:
  using Error::Error;
};

class DivergenceError : public Error {  // integral numerically divergent
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {  // array sizes or value sets do not match
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {  // grid too coarse for the request
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {  // unreadable input or unwritable output
 public:
  using Error::Error;
};

}  // namespace nlpl
