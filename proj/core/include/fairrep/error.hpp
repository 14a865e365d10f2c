#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairrep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes that do not line up (matrix widths, vector lengths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A NaN or infinity where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration, including empty conditioning cells in class weights.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A metric whose conditioning event has zero mass.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// A theorem checker was called outside its preconditions.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fairrep
