#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace leakmip {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad file contents, shape mismatches, out-of-range
/// parameters. Carries the 1-based line number when it came from a file.
class InvalidInput : public Error {
public:
  explicit InvalidInput(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class ShapeMismatch : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

class IdentifierMismatch : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

/// An exact solver refused to run because the search space is above the cap.
class BudgetExceeded : public Error {
public:
  using Error::Error;
};

/// The instance generator ran out of attempts before meeting its target.
class GeneratorExhausted : public Error {
public:
  using Error::Error;
};

}  // namespace leakmip
