#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "irm/distribution.hpp"
#include "irm/risk_measures.hpp"

namespace irm {

using NodeId = std::size_t;

struct TreeEdge {
  double probability;
  // Cost incurred on the transition out of the parent's stage.
  double cost;
  NodeId child;
};

struct TreeNode {
  int stage = 0;
  std::vector<TreeEdge> children;
  // Only on stage N-1 nodes without children: the law of the last-stage cost.
  std::optional<MixedDistribution> payoff;
};

/// Finite filtered probability space with costs on edges.
///
/// Node 0 is the root (stage 0). Nodes are stored parent-before-child, so a
/// reverse sweep over ids visits children before parents. Trees are
/// immutable once built; use ScenarioTree::Builder.
class ScenarioTree {
 public:
  static constexpr NodeId kRoot = 0;

  class Builder {
   public:
    Builder();
    NodeId add_child(NodeId parent, double probability, double cost);
    // Attaches a continuous last-stage cost law to a childless node.
    void set_payoff(NodeId node, MixedDistribution payoff);
    // Validates probabilities, stages and leaf depths.
    ScenarioTree build(int horizon) &&;

   private:
    std::vector<TreeNode> nodes_;
  };

  // Single path with the given per-stage costs.
  static ScenarioTree path(const std::vector<double>& costs);

  int horizon() const { return horizon_; }
  std::size_t size() const { return nodes_.size(); }
  const TreeNode& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  // Number of root-to-leaf paths (payoff nodes count once).
  std::size_t path_count() const;

 private:
  ScenarioTree(int horizon, std::vector<TreeNode> nodes)
      : horizon_(horizon), nodes_(std::move(nodes)) {}

  int horizon_;
  std::vector<TreeNode> nodes_;
};

// One-step risk functional per stage, rho_0 ... rho_{N-1}.
struct IrmSpec {
  std::vector<RiskFunctional> per_stage;

  static IrmSpec uniform(const RiskFunctional& rf, int horizon);
  int horizon() const { return static_cast<int>(per_stage.size()); }
};

struct IrmEvaluation {
  double root_value;
  // node_values[id] = rho_n of the discounted cost-to-go at that node.
  std::vector<double> node_values;
};

/// Backward recursion W(leaf) = 0, W(node) = rho_n[cost + lambda W(child)].
///
/// Payoff nodes evaluate rho_{N-1} on their MixedDistribution in closed form.
IrmEvaluation irm_evaluate(const ScenarioTree& tree, const IrmSpec& spec, double lambda);

struct TotalOptions {
  std::size_t path_cap = 10'000'000;
  bool merge_atoms = true;
};

// Law of sum_n lambda^n C_n by path enumeration. Atoms with values equal
// within 1e-12 (relative, floor 1) are merged unless disabled.
MixedDistribution discounted_total_distribution(const ScenarioTree& tree, double lambda,
                                                const TotalOptions& options = {});

// RM[sum lambda^n C_n].
double rmd(const ScenarioTree& tree, const RiskFunctional& rf, double lambda);
// E[u(sum lambda^n C_n)].
double eud(const ScenarioTree& tree, const DisutilityFunction& u, double lambda);

// ---------------------------------------------------------------------------
// Preference schedules

struct DelayedOption {
  MixedDistribution cost;
  // Period in which the cost is paid; no information arrives earlier.
  int delay;
};

struct PreferenceAt {
  int time;
  std::size_t preferred;
  std::vector<double> values;
};

// Evaluates every option at time t as rf[lambda^{delay - t} cost]. Rejects t
// beyond the smallest delay.
PreferenceAt preference_at(const RiskFunctional& rf, double lambda,
                           const std::vector<DelayedOption>& options, int time);

// preference_at for t = 0 ... min delay.
std::vector<PreferenceAt> preference_over_time(const RiskFunctional& rf, double lambda,
                                               const std::vector<DelayedOption>& options);

// True when the preferred index changes somewhere in the schedule.
bool preference_flips(const std::vector<PreferenceAt>& schedule);

}  // namespace irm
