#pragma once

#include <stdexcept>
#include <string>

namespace mtlab {

// Every error raised by the library derives from Error; the CLI maps the
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Query outside the tabulated range of a space or table.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Malformed input data (broken invariants, parse failures).
class InputError : public Error {
 public:
  using Error::Error;
};

// A hypothesis of the underlying statement is not met by the input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Enumeration size above the configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Profile vanishes or its small-volume asymptote does not settle.
class SingularProfileError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

[[noreturn]] void fail_domain(const std::string& what);
[[noreturn]] void fail_range(const std::string& what);
[[noreturn]] void fail_input(const std::string& what);
[[noreturn]] void fail_precondition(const std::string& what);

}  // namespace mtlab
