#pragma once

#include <stdexcept>
#include <string>

namespace dsee {

/// Raised when a caller violates an operation's precondition (bad index,
/// out-of-range constant, wrong call order).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a requested quantity does not exist, e.g. an infinite moment
/// or a scan that never reaches its target.
class Unavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dsee
