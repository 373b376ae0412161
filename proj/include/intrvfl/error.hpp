#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace intrvfl {

// Base for every error the library raises on bad input or configuration.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `row()` is 1-based and counts the header line.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  [[nodiscard]] std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Data that parses but violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Invalid model or run configuration. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace intrvfl
