#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsbn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, or 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A K value or conditional probability came out negative.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Structural problems: cycles, forbidden parent adjacency, scope mismatch.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Enumeration or joint computation would exceed a size guard.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsbn
