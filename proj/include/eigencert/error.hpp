#pragma once

#include <stdexcept>
#include <string>

namespace eigencert {

// Every failure surfaced by the library derives from Error so callers can
// catch one type and still branch on the concrete condition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class IllConditionedBasis : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConditionViolated : public Error {
 public:
  using Error::Error;
};

class EmptySystem : public Error {
 public:
  using Error::Error;
};

class MissingConstant : public Error {
 public:
  using Error::Error;
};

class GapViolated : public Error {
 public:
  using Error::Error;
};

class SeparationViolated : public Error {
 public:
  using Error::Error;
};

class OrderingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace eigencert
