#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mwf {

/// Malformed text. `offset` is the byte position of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(std::size_t offset, const std::string& name, const std::string& why = "unknown identifier")
      : ParseError(offset, why + " '" + name + "'"), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Numeric evaluation failed: unbound variable, opaque symbol, or a singular point.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mwf
