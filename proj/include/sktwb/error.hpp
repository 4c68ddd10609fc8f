#pragma once

#include <stdexcept>
#include <string>

namespace sktwb {

/// Base of every exception thrown by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unusable input: syntax, unknown symbols, violated
/// preconditions. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Arithmetic misuse (division by zero, incompatible fields).
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// A mathematical validity check failed on otherwise well-formed input
/// (d^2 != 0, non-integrable J, ...). Carries a printable witness.
class CheckFailure : public Error {
 public:
  CheckFailure(const std::string& what, std::string witness)
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

}  // namespace sktwb
