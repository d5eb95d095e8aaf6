#pragma once

#include <stdexcept>
#include <string>

namespace irm {

// Thrown when an input violates a documented invariant (bad weights, malformed
// kernel, horizon mismatch, ...). The message names the violated invariant.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an enumeration would exceed a configured cap (paths, policies,
// nodes).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kProbabilityTolerance = 1e-12;

}  // namespace irm
