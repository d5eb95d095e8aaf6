#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace irm {

struct PointMass {
  double value;
};

// Uniform law on [lo, hi]; lo < hi strictly. A zero-width segment must be a
// PointMass.
struct UniformSegment {
  double lo;
  double hi;
};

using Outcome = std::variant<PointMass, UniformSegment>;

struct Component {
  double weight;
  Outcome outcome;
};

// A discrete atom used on the hot paths (tree nodes, DP backups).
struct WeightedValue {
  double weight;
  double value;
};

/// Finite mixture of point masses and uniform segments.
///
/// Weights are nonnegative and sum to one within kProbabilityTolerance; the
/// support is bounded by construction. Instances are immutable.
class MixedDistribution {
 public:
  explicit MixedDistribution(std::vector<Component> components);

  static MixedDistribution point(double value);
  static MixedDistribution uniform(double lo, double hi);
  // Atoms with equal values are kept as separate components.
  static MixedDistribution discrete(std::span<const WeightedValue> atoms);

  const std::vector<Component>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  // True when every component is a PointMass.
  bool is_discrete() const;

 private:
  std::vector<Component> components_;
};

double essential_sup(const MixedDistribution& dist);
double essential_inf(const MixedDistribution& dist);

// Pr(Y <= y).
double cdf(const MixedDistribution& dist, double y);

// Every PointMass(v) -> PointMass(a v + b), every UniformSegment(lo, hi) ->
// UniformSegment(a lo + b, a hi + b). Requires a > 0.
MixedDistribution affine_transform(const MixedDistribution& dist, double a, double b);

// Like affine_transform but accepts a == 0, collapsing to PointMass(b).
MixedDistribution scale_and_shift(const MixedDistribution& dist, double a, double b);

// Mixture sum_i w_i * parts_i. Weights must be a probability vector.
MixedDistribution mixture(std::span<const double> weights,
                          std::span<const MixedDistribution> parts);

}  // namespace irm
