#pragma once

#include <stdexcept>
#include <string>

namespace emx {

/// An input violated an operation's precondition (wrong subset size, empty
/// sample, malformed distribution, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource bound (set size cap, enumeration limit, subset
/// count) would be exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A problem lies outside the sizes an exhaustive procedure accepts.
class GuardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scheme broke its own contract (selection property, budget).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace emx
