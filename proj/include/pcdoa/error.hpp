#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcdoa {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Raised when the number of sources is not below the subarray size.
class IdentifiabilityError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// The noise-debiased covariance has a nonpositive eigenvalue among the
/// leading `index` (1-based) ones.
class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(std::size_t index, const std::string& what)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Malformed input file. `row()` is the 1-based line number, 0 when the
/// problem is not tied to a single line.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what) : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcdoa
