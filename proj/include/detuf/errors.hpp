#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace detuf {

/// Invalid argument to a public operation (bad n, p, vertex id, window...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke a documented precondition (e.g. passed a non-root).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge-list input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace detuf
