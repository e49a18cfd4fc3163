#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dynmatch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class SeedMismatch : public Error {
 public:
  using Error::Error;
};

class NegativeFinalMultiplicity : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A message carried an edge that is not in the sender's declared graph.
class InvalidEdge : public Error {
 public:
  using Error::Error;
};

/// A one-pass consumer was fed again after it was finalized.
class OnePassViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dynmatch
