#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qccilc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands act on different numbers of qubits (or modes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition or type invariant was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when not line-specific.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line),
        detail_(what) {}

  std::size_t line() const noexcept { return line_; }
  /// Message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// No set of mutually anti-commuting entanglers could be constructed.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerics did not converge or a size cap was exceeded.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline void check_same_qubits(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw DimensionError(std::string(where) + ": qubit count mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace qccilc
