#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semdim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The input is valid but carries no usable signal: zero variance, a zero-norm
/// direction, an empty pole. Callers treat this as "degenerate", not as a crash.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration. `field()` is a dotted path such as `embeddings[1].path`.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace semdim
