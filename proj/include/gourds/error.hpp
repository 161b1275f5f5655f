#pragma once

#include <stdexcept>
#include <string>

namespace gourds {

// Base for every domain error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A move that is not legal in the configuration it is applied to.
class IllegalMove : public Error {
 public:
  using Error::Error;
};

// Precondition on the board (improper, uncovered, ...) does not hold.
class BoardError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the instance exceeds a size guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace gourds
