#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsolve {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid problem sizes (grid too small, N not a perfect square, ...).
class SizingError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Exact zero pivot during a factorisation. `row` is the elimination step.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, std::size_t row)
      : Error(what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

}  // namespace hsolve
