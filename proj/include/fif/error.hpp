#pragma once

#include <stdexcept>
#include <string>

namespace fif {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression or config text that does not conform to its grammar.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A grid, matrix or sample set would exceed the configured memory budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Two computations that must agree did not (e.g. lower bound above upper bound).
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Input that parses but is unusable (missing keys, wrong counts, unknown builtin).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fif
