#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbfscc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (QDIMACS, proof traces, formulas).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An exhaustive oracle was asked to work beyond its configured scale.
class CapError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the input value does not hold (e.g. synthesising a
/// winning universal strategy for a true formula).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A proof, strategy or inequality failed its check.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbfscc
