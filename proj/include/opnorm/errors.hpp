#pragma once

#include <stdexcept>
#include <string>

namespace opnorm {

/// Caller supplied something the contract forbids (wrong length, NaN, bad name).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A bounded internal procedure ran out of budget (retries, sweeps).
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opnorm
