#pragma once

#include <stdexcept>
#include <string>

namespace hllg {

/// Invalid user input: grid sizes, config values, mismatched shapes.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical run went bad: NaN/Inf in the state, CG stalled, step size underflow.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hllg
