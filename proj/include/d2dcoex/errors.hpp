#pragma once

#include <stdexcept>
#include <string>

namespace d2dcoex {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario parameters or geometry that cannot be realised.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedParameter : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a model function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A file that parsed but violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Missing or unreadable input file.
class UnreadableFile : public Error {
 public:
  using Error::Error;
};

class InfeasibleAssignment : public Error {
 public:
  using Error::Error;
};

class EmptyReport : public Error {
 public:
  using Error::Error;
};

}  // namespace d2dcoex
