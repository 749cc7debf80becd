#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace repulse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A sampler cannot propose any candidate (e.g. all categorical mass on empty levels).
class SamplerExhausted : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds an enumeration guard.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Every principal minor of a kernel is zero.
class DegenerateKernel : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public InvalidInput {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InvalidInput("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// IDX container failures.
class IdxError : public Error {
 public:
  enum class Kind { io, magic_mismatch, truncated, count_mismatch };

  IdxError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  [[nodiscard]] Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace repulse
