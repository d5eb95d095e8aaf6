#pragma once

#include <random>

#include "irm/distribution.hpp"
#include "irm/mdp.hpp"
#include "irm/scenario_tree.hpp"

namespace irm {

// Generators shared by the property checkers, the test suites and `irm check`.
// All draws come from the caller's engine, so results are reproducible by seed.

struct RandomDistributionOptions {
  int max_components = 5;
  double segment_probability = 0.3;
  double value_lo = -10.0;
  double value_hi = 10.0;
};

MixedDistribution random_distribution(std::mt19937_64& rng,
                                      const RandomDistributionOptions& options = {});

struct RandomTreeOptions {
  int max_horizon = 4;
  int max_children = 5;
  double cost_lo = -10.0;
  double cost_hi = 10.0;
};

ScenarioTree random_tree(std::mt19937_64& rng, const RandomTreeOptions& options = {});

struct RandomMdpOptions {
  int max_horizon = 3;
  int max_states = 3;
  int max_actions = 3;
  double cost_lo = 0.0;
  double cost_hi = 10.0;
  double discount = 1.0;
};

// Every action is available in every state; some transitions get probability 0.
FiniteHorizonMdp random_mdp(std::mt19937_64& rng, const RandomMdpOptions& options = {});

// Random probability vector of the given size with strictly positive entries.
std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n);

}  // namespace irm
