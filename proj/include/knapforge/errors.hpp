#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace knapforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or violated preconditions.
class ParamError : public Error {
 public:
  using Error::Error;
};

// Mismatched vector/matrix dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Value outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Undecodable target: inconsistent linear system, unrepresentable subset sum,
// or a ciphertext that fails the re-encryption check.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Linearly dependent rows where a basis was required.
class RankError : public Error {
 public:
  using Error::Error;
};

// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace knapforge
