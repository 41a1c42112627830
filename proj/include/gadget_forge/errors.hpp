#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gadget_forge {

/// Base of every error raised by the library. The CLI maps all of these to
/// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed o3s input. `line()` is 1-based; 0 means end of input.
class ParseError : public Error {
 public:
  enum class Kind { kHeader, kArity, kVarRange, kToken, kClauseCount };

  ParseError(Kind kind, std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated (e.g. a non-homogeneous input where
/// a form is required).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration requested beyond the configured guard.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace gadget_forge
