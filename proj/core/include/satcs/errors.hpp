#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace satcs {

// Raised when a caller hands an operation arguments that violate its
// precondition (dimension mismatch, out-of-range parameter, partial model).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Raised by the text readers. Carries the 1-based line the problem was found on.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace satcs
