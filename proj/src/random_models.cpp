#include "irm/random_models.hpp"

#include <algorithm>
#include <string>

namespace irm {
namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    // Bounded away from zero so every entry is a genuine outcome.
    x = 0.05 + std::exponential_distribution<double>(1.0)(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

MixedDistribution random_distribution(std::mt19937_64& rng, const RandomDistributionOptions& options) {
  const int k = uniform_int(rng, 1, options.max_components);
  const auto weights = random_simplex(rng, static_cast<std::size_t>(k));
  std::vector<Component> components;
  for (int i = 0; i < k; ++i) {
    const double a = uniform_real(rng, options.value_lo, options.value_hi);
    if (uniform_real(rng, 0.0, 1.0) < options.segment_probability) {
      double b = uniform_real(rng, options.value_lo, options.value_hi);
      if (a == b) b = a + 1.0;
      components.push_back({weights[static_cast<std::size_t>(i)], UniformSegment{std::min(a, b), std::max(a, b)}});
    } else {
      components.push_back({weights[static_cast<std::size_t>(i)], PointMass{a}});
    }
  }
  return MixedDistribution(std::move(components));
}

ScenarioTree random_tree(std::mt19937_64& rng, const RandomTreeOptions& options) {
  const int horizon = uniform_int(rng, 1, options.max_horizon);
  ScenarioTree::Builder b;
  std::vector<NodeId> frontier{ScenarioTree::kRoot};
  for (int n = 0; n < horizon; ++n) {
    std::vector<NodeId> next;
    for (NodeId id : frontier) {
      const int k = uniform_int(rng, 1, options.max_children);
      const auto p = random_simplex(rng, static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i)
        next.push_back(b.add_child(id, p[static_cast<std::size_t>(i)],
                                   uniform_real(rng, options.cost_lo, options.cost_hi)));
    }
    frontier = std::move(next);
  }
  return std::move(b).build(horizon);
}

FiniteHorizonMdp random_mdp(std::mt19937_64& rng, const RandomMdpOptions& options) {
  const int horizon = uniform_int(rng, 1, options.max_horizon);
  const int n_actions = uniform_int(rng, 1, options.max_actions);
  std::vector<std::string> actions;
  for (int a = 0; a < n_actions; ++a) actions.push_back("a" + std::to_string(a));
  FiniteHorizonMdp::Builder b(horizon, actions);
  std::vector<std::size_t> counts;
  for (int n = 0; n <= horizon; ++n) {
    const int k = uniform_int(rng, 1, options.max_states);
    counts.push_back(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s) b.add_state(n, "s" + std::to_string(n) + "_" + std::to_string(s));
  }
  b.set_initial(static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(counts[0]) - 1)));
  b.set_discount(options.discount);
  for (int n = 0; n < horizon; ++n) {
    const std::size_t next_count = counts[static_cast<std::size_t>(n) + 1];
    for (std::size_t s = 0; s < counts[static_cast<std::size_t>(n)]; ++s) {
      for (int a = 0; a < n_actions; ++a) {
        // Random support within S_{n+1}; at least one successor.
        std::vector<std::size_t> support;
        for (std::size_t t = 0; t < next_count; ++t)
          if (uniform_real(rng, 0.0, 1.0) < 0.7) support.push_back(t);
        if (support.empty()) support.push_back(static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(next_count) - 1)));
        const auto p = random_simplex(rng, support.size());
        for (std::size_t i = 0; i < support.size(); ++i)
          b.add_transition(n, s, static_cast<std::size_t>(a), support[i], p[i],
                           uniform_real(rng, options.cost_lo, options.cost_hi));
      }
    }
  }
  return std::move(b).build();
}

}  // namespace irm
