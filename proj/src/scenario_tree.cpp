#include "irm/scenario_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "irm/detail/overloaded.hpp"
#include "irm/error.hpp"

namespace irm {

ScenarioTree::Builder::Builder() { nodes_.push_back(TreeNode{}); }

NodeId ScenarioTree::Builder::add_child(NodeId parent, double probability, double cost) {
  if (parent >= nodes_.size()) throw InputError("scenario tree: unknown parent node");
  if (nodes_[parent].payoff) throw InputError("scenario tree: payoff node cannot have children");
  const NodeId id = nodes_.size();
  TreeNode child;
  child.stage = nodes_[parent].stage + 1;
  nodes_.push_back(std::move(child));
  nodes_[parent].children.push_back(TreeEdge{probability, cost, id});
  return id;
}

void ScenarioTree::Builder::set_payoff(NodeId node, MixedDistribution payoff) {
  if (node >= nodes_.size()) throw InputError("scenario tree: unknown node");
  if (!nodes_[node].children.empty())
    throw InputError("scenario tree: payoff node cannot have children");
  nodes_[node].payoff = std::move(payoff);
}

ScenarioTree ScenarioTree::Builder::build(int horizon) && {
  if (horizon < 1) throw InputError("scenario tree: horizon must be >= 1");
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const auto& n = nodes_[id];
    std::ostringstream where;
    where << "scenario tree node " << id << " (stage " << n.stage << "): ";
    if (n.payoff) {
      if (n.stage != horizon - 1)
        throw InputError(where.str() + "payoff only allowed at stage horizon-1");
      continue;
    }
    if (n.children.empty()) {
      if (n.stage != horizon)
        throw InputError(where.str() + "every root-to-leaf path must have exactly horizon edges");
      continue;
    }
    if (n.stage >= horizon) throw InputError(where.str() + "node beyond horizon has children");
    double total = 0.0;
    for (const auto& e : n.children) {
      if (!(e.probability > 0.0) || !std::isfinite(e.probability))
        throw InputError(where.str() + "child probabilities must be positive");
      if (!std::isfinite(e.cost)) throw InputError(where.str() + "edge cost must be finite");
      total += e.probability;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << where.str() << "child probabilities sum to " << total << ", expected 1";
      throw InputError(msg.str());
    }
  }
  return ScenarioTree(horizon, std::move(nodes_));
}

ScenarioTree ScenarioTree::path(const std::vector<double>& costs) {
  Builder b;
  NodeId at = kRoot;
  for (double c : costs) at = b.add_child(at, 1.0, c);
  return std::move(b).build(static_cast<int>(costs.size()));
}

std::size_t ScenarioTree::path_count() const {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> count(nodes_.size(), 1);
  for (NodeId id = nodes_.size(); id-- > 0;) {
    if (nodes_[id].children.empty()) continue;
    std::size_t total = 0;
    for (const auto& e : nodes_[id].children)
      total = (kMax - total < count[e.child]) ? kMax : total + count[e.child];
    count[id] = total;
  }
  return count[kRoot];
}

IrmSpec IrmSpec::uniform(const RiskFunctional& rf, int horizon) {
  if (horizon < 1) throw InputError("irm spec: horizon must be >= 1");
  return IrmSpec{std::vector<RiskFunctional>(static_cast<std::size_t>(horizon), rf)};
}

namespace {

void require_lambda(double lambda, const char* who) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream msg;
    msg << who << ": lambda must lie in [0, 1], got " << lambda;
    throw InputError(msg.str());
  }
}

}  // namespace

IrmEvaluation irm_evaluate(const ScenarioTree& tree, const IrmSpec& spec, double lambda) {
  require_lambda(lambda, "irm_evaluate");
  if (spec.horizon() != tree.horizon()) {
    std::ostringstream msg;
    msg << "irm_evaluate: spec has " << spec.horizon() << " stages but tree horizon is "
        << tree.horizon();
    throw InputError(msg.str());
  }
  const auto& nodes = tree.nodes();
  std::vector<double> values(nodes.size(), 0.0);
  std::vector<WeightedValue> scratch;
  for (NodeId id = nodes.size(); id-- > 0;) {
    const auto& n = nodes[id];
    const auto& rho = spec.per_stage[static_cast<std::size_t>(std::min(n.stage, spec.horizon() - 1))];
    if (n.payoff) {
      values[id] = evaluate(rho, *n.payoff);
    } else if (!n.children.empty()) {
      scratch.clear();
      for (const auto& e : n.children)
        scratch.push_back({e.probability, e.cost + lambda * values[e.child]});
      values[id] = evaluate_discrete(rho, scratch);
    }
  }
  return IrmEvaluation{values[ScenarioTree::kRoot], std::move(values)};
}

MixedDistribution discounted_total_distribution(const ScenarioTree& tree, double lambda,
                                                const TotalOptions& options) {
  require_lambda(lambda, "discounted_total_distribution");
  if (tree.path_count() > options.path_cap) {
    std::ostringstream msg;
    msg << "discounted_total_distribution: " << tree.path_count() << " paths exceed the cap of "
        << options.path_cap;
    throw ResourceError(msg.str());
  }

  std::vector<WeightedValue> atoms;
  std::vector<Component> segments;
  struct Frame {
    NodeId id;
    double probability;
    double total;
    double discount;
  };
  std::vector<Frame> stack{{ScenarioTree::kRoot, 1.0, 0.0, 1.0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const auto& n = tree.node(f.id);
    if (n.payoff) {
      for (const auto& c : n.payoff->components()) {
        const double w = f.probability * c.weight;
        std::visit(detail::Overloaded{
                       [&](const PointMass& p) { atoms.push_back({w, f.total + f.discount * p.value}); },
                       [&](const UniformSegment& s) {
                         const double lo = f.total + f.discount * s.lo;
                         const double hi = f.total + f.discount * s.hi;
                         if (lo < hi)
                           segments.push_back({w, UniformSegment{lo, hi}});
                         else
                           atoms.push_back({w, lo});
                       }},
                   c.outcome);
      }
    } else if (n.children.empty()) {
      atoms.push_back({f.probability, f.total});
    } else {
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
        stack.push_back({it->child, f.probability * it->probability, f.total + f.discount * it->cost,
                         f.discount * lambda});
    }
  }

  std::sort(atoms.begin(), atoms.end(),
            [](const WeightedValue& a, const WeightedValue& b) { return a.value < b.value; });
  std::vector<Component> out;
  out.reserve(atoms.size() + segments.size());
  for (const auto& a : atoms) {
    if (options.merge_atoms && !out.empty()) {
      auto& prev = out.back();
      const double pv = std::get<PointMass>(prev.outcome).value;
      if (std::abs(a.value - pv) <= 1e-12 * std::max(1.0, std::abs(pv))) {
        prev.weight += a.weight;
        continue;
      }
    }
    out.push_back({a.weight, PointMass{a.value}});
  }
  out.insert(out.end(), segments.begin(), segments.end());
  return MixedDistribution(std::move(out));
}

double rmd(const ScenarioTree& tree, const RiskFunctional& rf, double lambda) {
  return evaluate(rf, discounted_total_distribution(tree, lambda));
}

double eud(const ScenarioTree& tree, const DisutilityFunction& u, double lambda) {
  return u.expected(discounted_total_distribution(tree, lambda));
}

PreferenceAt preference_at(const RiskFunctional& rf, double lambda,
                           const std::vector<DelayedOption>& options, int time) {
  require_lambda(lambda, "preference_at");
  if (options.empty()) throw InputError("preference_at: no options");
  int min_delay = std::numeric_limits<int>::max();
  for (const auto& o : options) {
    if (o.delay < 1) throw InputError("preference_at: option delays must be >= 1");
    min_delay = std::min(min_delay, o.delay);
  }
  if (time < 0 || time > min_delay) {
    std::ostringstream msg;
    msg << "preference_at: evaluation time " << time << " outside [0, " << min_delay << "]";
    throw InputError(msg.str());
  }
  PreferenceAt out{time, 0, {}};
  for (std::size_t i = 0; i < options.size(); ++i) {
    const double factor = std::pow(lambda, options[i].delay - time);
    out.values.push_back(evaluate(rf, scale_and_shift(options[i].cost, factor, 0.0)));
    if (out.values[i] < out.values[out.preferred]) out.preferred = i;
  }
  return out;
}

std::vector<PreferenceAt> preference_over_time(const RiskFunctional& rf, double lambda,
                                               const std::vector<DelayedOption>& options) {
  if (options.empty()) throw InputError("preference_over_time: no options");
  int min_delay = std::numeric_limits<int>::max();
  for (const auto& o : options) min_delay = std::min(min_delay, o.delay);
  std::vector<PreferenceAt> schedule;
  for (int t = 0; t <= min_delay; ++t) schedule.push_back(preference_at(rf, lambda, options, t));
  return schedule;
}

bool preference_flips(const std::vector<PreferenceAt>& schedule) {
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i].preferred != schedule[0].preferred) return true;
  return false;
}

}  // namespace irm
