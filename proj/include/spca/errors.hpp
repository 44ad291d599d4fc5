#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spca {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Degree/connectivity precondition of the irregularity definition fails.
class IrregularityUndefined : public Error {
 public:
  using Error::Error;
};

// Algebraic connectivity is zero where a positive value is required.
class Disconnected : public Error {
 public:
  using Error::Error;
};

class BucketExhausted : public Error {
 public:
  using Error::Error;
};

class DegenerateBaseline : public Error {
 public:
  using Error::Error;
};

class ThresholdTooLarge : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Row/column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t col)
      : Error(format(what, row, col)), row_(row), col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  static std::string format(const std::string& what, std::size_t row, std::size_t col) {
    std::string out = what;
    if (row != 0) {
      out += " (row " + std::to_string(row);
      if (col != 0) out += ", column " + std::to_string(col);
      out += ")";
    }
    return out;
  }

  std::size_t row_;
  std::size_t col_;
};

}  // namespace spca
