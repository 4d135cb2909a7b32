#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed term text. position() is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error("parse error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

/// Depth, size, rank or memo budget exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Combinatorial guard on enumerations and oracles.
class GuardError : public Error {
 public:
  using Error::Error;
};

class AddressError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace clo
