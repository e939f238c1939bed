#pragma once

#include <stdexcept>
#include <string>

namespace crsim {

// Bad configuration or malformed input (CLI exit code 2).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rule preconditions violated by the data handed to it.
struct InsufficientReviews : ValidationError {
  using ValidationError::ValidationError;
};

// The score-distribution adjustment cannot produce a valid pmf for the
// requested (quality, sigma) pair (CLI exit code 3).
struct ModelInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact computation would exceed the instance size guard.
struct InstanceTooLarge : ValidationError {
  using ValidationError::ValidationError;
};

// Brute-force enumeration would exceed its step budget.
struct BudgetExceeded : ValidationError {
  using ValidationError::ValidationError;
};

// Reports from different scenarios cannot be merged.
struct ConfigMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace crsim
