#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace specwave {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument / precondition violation.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

// Numerical failure (eigensolver breakdown, unmatched adjoint pair, ...).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// Configuration file problems; carries one message per offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> field_errors)
      : Error(what), fields(std::move(field_errors)) {}
  std::vector<std::string> fields;
};

}  // namespace specwave
