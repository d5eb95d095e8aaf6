#include "irm/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "irm/detail/overloaded.hpp"
#include "irm/error.hpp"

namespace irm {
namespace {

using detail::Overloaded;

void validate(const std::vector<Component>& components) {
  if (components.empty()) throw InputError("distribution: no components");
  double total = 0.0;
  bool any_positive = false;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (!std::isfinite(c.weight) || c.weight < 0.0) {
      std::ostringstream msg;
      msg << "distribution: component " << i << " has invalid weight " << c.weight
          << " (weights must be finite and >= 0)";
      throw InputError(msg.str());
    }
    any_positive = any_positive || c.weight > 0.0;
    total += c.weight;
    std::visit(Overloaded{
                   [&](const PointMass& p) {
                     if (!std::isfinite(p.value))
                       throw InputError("distribution: point mass value must be finite");
                   },
                   [&](const UniformSegment& s) {
                     if (!std::isfinite(s.lo) || !std::isfinite(s.hi))
                       throw InputError("distribution: segment bounds must be finite");
                     if (!(s.lo < s.hi)) {
                       std::ostringstream msg;
                       msg << "distribution: segment [" << s.lo << ", " << s.hi
                           << "] violates lo < hi (use a point mass for zero width)";
                       throw InputError(msg.str());
                     }
                   }},
               c.outcome);
  }
  if (!any_positive) throw InputError("distribution: all weights are zero");
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "distribution: weights sum to " << total << ", expected 1";
    throw InputError(msg.str());
  }
}

}  // namespace

MixedDistribution::MixedDistribution(std::vector<Component> components)
    : components_(std::move(components)) {
  validate(components_);
}

MixedDistribution MixedDistribution::point(double value) {
  return MixedDistribution({Component{1.0, PointMass{value}}});
}

MixedDistribution MixedDistribution::uniform(double lo, double hi) {
  return MixedDistribution({Component{1.0, UniformSegment{lo, hi}}});
}

MixedDistribution MixedDistribution::discrete(std::span<const WeightedValue> atoms) {
  std::vector<Component> components;
  components.reserve(atoms.size());
  for (const auto& a : atoms) components.push_back({a.weight, PointMass{a.value}});
  return MixedDistribution(std::move(components));
}

bool MixedDistribution::is_discrete() const {
  return std::all_of(components_.begin(), components_.end(), [](const Component& c) {
    return std::holds_alternative<PointMass>(c.outcome);
  });
}

double essential_sup(const MixedDistribution& dist) {
  double sup = -std::numeric_limits<double>::infinity();
  for (const auto& c : dist.components()) {
    if (c.weight <= 0.0) continue;
    sup = std::max(sup, std::visit(Overloaded{[](const PointMass& p) { return p.value; },
                                              [](const UniformSegment& s) { return s.hi; }},
                                   c.outcome));
  }
  return sup;
}

double essential_inf(const MixedDistribution& dist) {
  double inf = std::numeric_limits<double>::infinity();
  for (const auto& c : dist.components()) {
    if (c.weight <= 0.0) continue;
    inf = std::min(inf, std::visit(Overloaded{[](const PointMass& p) { return p.value; },
                                              [](const UniformSegment& s) { return s.lo; }},
                                   c.outcome));
  }
  return inf;
}

double cdf(const MixedDistribution& dist, double y) {
  double f = 0.0;
  for (const auto& c : dist.components()) {
    f += c.weight * std::visit(Overloaded{[&](const PointMass& p) { return p.value <= y ? 1.0 : 0.0; },
                                          [&](const UniformSegment& s) {
                                            return std::clamp((y - s.lo) / (s.hi - s.lo), 0.0, 1.0);
                                          }},
                               c.outcome);
  }
  return f;
}

MixedDistribution affine_transform(const MixedDistribution& dist, double a, double b) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    std::ostringstream msg;
    msg << "affine_transform: scale must be > 0, got " << a;
    throw InputError(msg.str());
  }
  std::vector<Component> out;
  out.reserve(dist.size());
  for (const auto& c : dist.components()) {
    out.push_back({c.weight, std::visit(Overloaded{[&](const PointMass& p) -> Outcome {
                                                     return PointMass{a * p.value + b};
                                                   },
                                                   [&](const UniformSegment& s) -> Outcome {
                                                     const double lo = a * s.lo + b;
                                                     const double hi = a * s.hi + b;
                                                     if (lo < hi) return UniformSegment{lo, hi};
                                                     return PointMass{lo};
                                                   }},
                                        c.outcome)});
  }
  return MixedDistribution(std::move(out));
}

MixedDistribution scale_and_shift(const MixedDistribution& dist, double a, double b) {
  if (a == 0.0) return MixedDistribution::point(b);
  return affine_transform(dist, a, b);
}

MixedDistribution mixture(std::span<const double> weights,
                          std::span<const MixedDistribution> parts) {
  if (weights.size() != parts.size())
    throw InputError("mixture: weight count does not match part count");
  std::vector<Component> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (weights[i] < 0.0) throw InputError("mixture: negative weight");
    for (const auto& c : parts[i].components())
      out.push_back({weights[i] * c.weight, c.outcome});
  }
  return MixedDistribution(std::move(out));
}

}  // namespace irm
