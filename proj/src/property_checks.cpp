#include "irm/property_checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "irm/error.hpp"
#include "irm/random_models.hpp"

namespace irm {
namespace {

constexpr double kMonotoneTolerance = 1e-9;
constexpr double kRelativeTolerance = 1e-9;

bool close(double lhs, double rhs) {
  return std::abs(lhs - rhs) <= kRelativeTolerance * std::max(1.0, std::abs(rhs));
}

// X = Y + d(omega) on a shared finite sample space. Segments are shifted as a
// whole, which keeps the comonotone coupling X >= Y pointwise.
std::pair<MixedDistribution, MixedDistribution> dominated_pair(std::mt19937_64& rng) {
  const auto y = random_distribution(rng);
  std::uniform_real_distribution<double> shift(0.0, 5.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Component> x_parts;
  for (const auto& c : y.components()) {
    const double d = coin(rng) < 0.3 ? 0.0 : shift(rng);
    if (const auto* pm = std::get_if<PointMass>(&c.outcome)) {
      x_parts.push_back({c.weight, PointMass{pm->value + d}});
    } else {
      const auto& seg = std::get<UniformSegment>(c.outcome);
      x_parts.push_back({c.weight, UniformSegment{seg.lo + d, seg.hi + d}});
    }
  }
  return {MixedDistribution(std::move(x_parts)), y};
}

Functional as_functional(const RiskFunctional& rf) {
  return [rf](const MixedDistribution& d) { return evaluate(rf, d); };
}

}  // namespace

PropertyReport check_monotonic(const Functional& fn, const std::string& name, std::size_t trials,
                               std::uint64_t seed) {
  PropertyReport report{"monotonicity", name, true, trials, 0, std::nullopt};
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    auto [x, y] = dominated_pair(rng);
    const double fx = fn(x);
    const double fy = fn(y);
    if (fx < fy - kMonotoneTolerance) {
      report.passed = false;
      report.counterexample = Counterexample{std::move(x), std::move(y), 0.0, fx, fy};
      return report;
    }
    report.trials_run = t + 1;
  }
  return report;
}

PropertyReport check_monotonic(const RiskFunctional& rf, std::size_t trials, std::uint64_t seed) {
  return check_monotonic(as_functional(rf), rf.describe(), trials, seed);
}

PropertyReport check_translation_invariance(const Functional& fn, const std::string& name,
                                            std::size_t trials, std::uint64_t seed) {
  PropertyReport report{"translation invariance", name, true, trials, 0, std::nullopt};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shift(-10.0, 10.0);
  for (std::size_t t = 0; t < trials; ++t) {
    auto x = random_distribution(rng);
    const double b = shift(rng);
    const double lhs = fn(affine_transform(x, 1.0, b));
    const double rhs = fn(x) + b;
    if (!close(lhs, rhs)) {
      report.passed = false;
      report.counterexample = Counterexample{std::move(x), std::nullopt, b, lhs, rhs};
      return report;
    }
    report.trials_run = t + 1;
  }
  return report;
}

PropertyReport check_translation_invariance(const RiskFunctional& rf, std::size_t trials,
                                            std::uint64_t seed) {
  return check_translation_invariance(as_functional(rf), rf.describe(), trials, seed);
}

PropertyReport check_positive_homogeneity(const Functional& fn, const std::string& name,
                                          std::size_t trials, std::uint64_t seed) {
  PropertyReport report{"positive homogeneity", name, true, trials, 0, std::nullopt};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(0.0, 10.0);
  for (std::size_t t = 0; t < trials; ++t) {
    auto x = random_distribution(rng);
    double a = scale(rng);
    if (a == 0.0) a = 10.0;
    const double lhs = fn(affine_transform(x, a, 0.0));
    const double rhs = a * fn(x);
    if (!close(lhs, rhs)) {
      report.passed = false;
      report.counterexample = Counterexample{std::move(x), std::nullopt, a, lhs, rhs};
      return report;
    }
    report.trials_run = t + 1;
  }
  return report;
}

PropertyReport check_positive_homogeneity(const RiskFunctional& rf, std::size_t trials,
                                          std::uint64_t seed) {
  return check_positive_homogeneity(as_functional(rf), rf.describe(), trials, seed);
}

PropertyReport check_composite_monotonic(const std::vector<RiskFunctional>& components,
                                         const std::vector<double>& coefficients, std::size_t trials,
                                         std::uint64_t seed) {
  if (components.size() != coefficients.size() || components.empty())
    throw InputError("check_composite_monotonic: need one coefficient per component");
  std::vector<CompositeTerm> terms;
  for (std::size_t i = 0; i < components.size(); ++i) terms.push_back({coefficients[i], components[i]});
  // composite() validates the coefficients.
  return check_monotonic(RiskFunctional::composite(std::move(terms)), trials, seed);
}

}  // namespace irm
