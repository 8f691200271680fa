#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cogme {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. `line` is 1-based (0 when the error is not tied to a
// line) and `byte_offset` counts from the start of the file.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line,
             std::size_t byte_offset, std::string field = {});

  std::size_t line() const { return line_; }
  std::size_t byte_offset() const { return byte_offset_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::size_t byte_offset_;
  std::string field_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidAnnotation : public Error {
 public:
  using Error::Error;
};

class TaxonomyError : public Error {
 public:
  using Error::Error;
};

// Inconsistent inputs across records or reports (join, merge, diff).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace cogme
