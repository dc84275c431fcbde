#pragma once

#include <stdexcept>
#include <string>

namespace singspec {

/// Shapes or spaces of two operands do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter lies outside the range an operation accepts.
class RangeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A supplied dual vector is not a subgradient of the functional.
class InvalidSubgradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The candidate is annihilated by the forward operator.
class KernelElementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace singspec
