#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace extra {

/// Bad input data: malformed files, unknown IDs, unsatisfiable constraints.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A DataError tied to a line of an input file (1-based).
class ParseError : public DataError {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what)
      : DataError(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

/// Caller violated an API precondition (bad config, mismatched signatures).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Training produced a non-finite parameter.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace extra
