#pragma once

#include <stdexcept>
#include <string>

namespace qdurr {

/// Argument outside the documented domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Floating-point failure: overflow, non-finite integrand, or a series that
/// exhausted its term cap before meeting its stopping criterion.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdurr
