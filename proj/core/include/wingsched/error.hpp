#pragma once

#include <stdexcept>
#include <string>

namespace wingsched {

enum class ErrorKind {
  InvalidConfig,   // malformed or out-of-range input data
  Validation,      // a structural invariant does not hold
  Constraint,      // a scheduling constraint cannot be satisfied
  Precondition,    // an operation was called on unsuitable inputs
  Infeasible,      // no admissible solution exists
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

} // namespace wingsched
