#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "irm/distribution.hpp"
#include "irm/risk_measures.hpp"

namespace irm {

// Any map from a distribution to a real; RiskFunctional is one instance, test
// fixtures (variance) are others.
using Functional = std::function<double(const MixedDistribution&)>;

struct Counterexample {
  MixedDistribution x;
  // Dominated variable for monotonicity checks.
  std::optional<MixedDistribution> y;
  // Shift b (translation) or scale a (homogeneity); unused for monotonicity.
  double parameter = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct PropertyReport {
  std::string property;
  std::string functional;
  bool passed = true;
  std::size_t trials = 0;
  // Trials executed before the first violation (== trials on pass).
  std::size_t trials_run = 0;
  std::optional<Counterexample> counterexample;
};

/// Samples finite sample spaces with X >= Y pointwise and reports the first
/// trial where fn(X) < fn(Y) - 1e-9.
PropertyReport check_monotonic(const Functional& fn, const std::string& name,
                               std::size_t trials, std::uint64_t seed);
PropertyReport check_monotonic(const RiskFunctional& rf, std::size_t trials, std::uint64_t seed);

// fn(X + b) == fn(X) + b with b uniform in [-10, 10], relative tolerance 1e-9.
PropertyReport check_translation_invariance(const Functional& fn, const std::string& name,
                                            std::size_t trials, std::uint64_t seed);
PropertyReport check_translation_invariance(const RiskFunctional& rf, std::size_t trials,
                                            std::uint64_t seed);

// fn(a X) == a fn(X) with a uniform in (0, 10], relative tolerance 1e-9.
PropertyReport check_positive_homogeneity(const Functional& fn, const std::string& name,
                                          std::size_t trials, std::uint64_t seed);
PropertyReport check_positive_homogeneity(const RiskFunctional& rf, std::size_t trials,
                                          std::uint64_t seed);

/// Monotonicity of sum_j c_j rho_j. Nonnegative affine combinations are the
/// nondecreasing aggregators implemented here; coefficients must be >= 0 and
/// sum to one.
PropertyReport check_composite_monotonic(const std::vector<RiskFunctional>& components,
                                         const std::vector<double>& coefficients,
                                         std::size_t trials, std::uint64_t seed);

}  // namespace irm
