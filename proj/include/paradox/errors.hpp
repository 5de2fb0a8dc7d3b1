#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace paradox {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed element, set expression, group spec or certificate text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        message_(what),
        position_(position) {}

  std::size_t position() const { return position_; }
  // The message without the position suffix.
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

/// Operands drawn from different groups.
class GroupMismatch : public Error {
 public:
  using Error::Error;
};

/// A map or relation was evaluated outside the set it is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structural invariant (disjointness, injectivity, ...) does not hold.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Semigroup membership could not be decided within the configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The operation is not implemented for this group or subgroup.
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace paradox
