#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sfl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller misuse: bad flags, mismatched configurations, illegal color transitions.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range input data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Input error tied to a 1-based line of a text source.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A probability distribution was requested from a state with no evidence.
class DistributionError : public Error {
 public:
  using Error::Error;
};

/// Internal state is inconsistent: out-of-order undo, counter overflow, broken invariants.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

}  // namespace sfl
