#pragma once

#include <stdexcept>
#include <string>

namespace hgm {

// Base of every error thrown by the library. The CLI maps each subclass
// onto a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Malformed input document or literal.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::string location = {})
      : Error(what), location_(std::move(location)) {}
  const char* kind() const noexcept override { return "parse_error"; }
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

// A mathematical precondition does not hold: a vanishing minor, a zero
// parameter entry in a denominator, a parameter outside the admissible regime.
class PreconditionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "precondition_error"; }
};

// An internal consistency check failed.
class InternalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "internal_error"; }
};

}  // namespace hgm
