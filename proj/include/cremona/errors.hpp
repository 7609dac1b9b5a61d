#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cremona {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (mismatched variable tables, bad flags, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A linear system whose matrix is identically singular.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// A denominator vanished identically (symbolic) or exactly (rational point).
class ExceptionalLocusError : public Error {
 public:
  using Error::Error;
};

class DegreeError : public Error {
 public:
  using Error::Error;
};

class NameError : public Error {
 public:
  using Error::Error;
};

/// Malformed source text; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Numeric step hit the exceptional locus of the scheme; carries the offending state.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, std::vector<double> state)
      : Error(what), state_(std::move(state)) {}

  const std::vector<double>& state() const noexcept { return state_; }

 private:
  std::vector<double> state_;
};

/// A configured size budget (bits, terms) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace cremona
