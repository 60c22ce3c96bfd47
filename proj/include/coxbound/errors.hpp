#pragma once

#include <stdexcept>
#include <string>

namespace coxbound {

// Exit-code families used by the command-line front end.
enum class ErrorKind { invariant = 1, input = 2, cap = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Malformed input: bad generator index, unparsable file, precondition broken.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

// An enumeration or horizon limit was hit. Never silently truncated.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what) : Error(ErrorKind::cap, what) {}
};

// A mathematical invariant failed (non-unique projection, cycle in a tree, ...).
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what)
      : Error(ErrorKind::invariant, what) {}
};

// A boundary direction did not stabilize within its horizon.
class NotStabilized : public Error {
 public:
  explicit NotStabilized(const std::string& what) : Error(ErrorKind::cap, what) {}
};

}  // namespace coxbound
