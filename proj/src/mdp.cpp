#include "irm/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "irm/error.hpp"
#include "irm/kernels.hpp"

namespace irm {

FiniteHorizonMdp::Builder::Builder(int horizon, std::vector<std::string> actions)
    : horizon_(horizon), actions_(std::move(actions)) {
  if (horizon_ < 1) throw InputError("mdp: horizon must be >= 1");
  if (actions_.empty()) throw InputError("mdp: action list is empty");
  states_.resize(static_cast<std::size_t>(horizon_) + 1);
}

std::size_t FiniteHorizonMdp::Builder::add_state(int stage, std::string name) {
  if (stage < 0 || stage > horizon_) throw InputError("mdp: state stage outside [0, horizon]");
  auto& row = states_[static_cast<std::size_t>(stage)];
  if (std::find(row.begin(), row.end(), name) != row.end())
    throw InputError("mdp: duplicate state '" + name + "' at stage " + std::to_string(stage));
  row.push_back(std::move(name));
  return row.size() - 1;
}

void FiniteHorizonMdp::Builder::add_transition(int stage, std::size_t state, std::size_t action,
                                               std::size_t next, double probability, double cost) {
  pending_.push_back({stage, state, action, Transition{next, probability, cost}});
}

FiniteHorizonMdp FiniteHorizonMdp::Builder::build() && {
  FiniteHorizonMdp mdp;
  mdp.horizon_ = horizon_;
  mdp.actions_ = std::move(actions_);
  mdp.states_ = std::move(states_);
  mdp.initial_ = initial_;
  mdp.discount_ = discount_;
  mdp.kernel_.resize(static_cast<std::size_t>(horizon_));
  for (int n = 0; n < horizon_; ++n) {
    mdp.kernel_[static_cast<std::size_t>(n)].assign(
        mdp.states_[static_cast<std::size_t>(n)].size(),
        std::vector<std::vector<Transition>>(mdp.actions_.size()));
  }
  for (const auto& p : pending_) {
    std::ostringstream where;
    where << "mdp transition (n=" << p.stage << ", s=" << p.state << ", a=" << p.action << "): ";
    if (p.stage < 0 || p.stage >= horizon_) throw InputError(where.str() + "stage outside [0, horizon)");
    auto& by_state = mdp.kernel_[static_cast<std::size_t>(p.stage)];
    if (p.state >= by_state.size()) throw InputError(where.str() + "unknown state");
    if (p.action >= mdp.actions_.size()) throw InputError(where.str() + "unknown action");
    by_state[p.state][p.action].push_back(p.transition);
  }
  mdp.validate();
  return mdp;
}

const std::vector<Transition>& FiniteHorizonMdp::kernel(int stage, std::size_t state,
                                                        std::size_t action) const {
  return kernel_.at(static_cast<std::size_t>(stage)).at(state).at(action);
}

std::vector<std::size_t> FiniteHorizonMdp::available_actions(int stage, std::size_t state) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < actions_.size(); ++a)
    if (available(stage, state, a)) out.push_back(a);
  return out;
}

std::optional<std::size_t> FiniteHorizonMdp::find_state(int stage, const std::string& name) const {
  const auto& row = states(stage);
  auto it = std::find(row.begin(), row.end(), name);
  if (it == row.end()) return std::nullopt;
  return static_cast<std::size_t>(it - row.begin());
}

std::optional<std::size_t> FiniteHorizonMdp::find_action(const std::string& name) const {
  auto it = std::find(actions_.begin(), actions_.end(), name);
  if (it == actions_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - actions_.begin());
}

void FiniteHorizonMdp::validate() const {
  if (!(discount_ >= 0.0 && discount_ <= 1.0)) throw InputError("mdp: lambda must lie in [0, 1]");
  for (int n = 0; n <= horizon_; ++n)
    if (states(n).empty()) throw InputError("mdp: stage " + std::to_string(n) + " has no states");
  if (initial_ >= states(0).size()) throw InputError("mdp: initial state is not a stage-0 state");

  for (int n = 0; n < horizon_; ++n) {
    for (std::size_t s = 0; s < state_count(n); ++s) {
      bool any = false;
      for (std::size_t a = 0; a < actions_.size(); ++a) {
        const auto& outcomes = kernel(n, s, a);
        if (outcomes.empty()) continue;
        any = true;
        std::ostringstream where;
        where << "transition kernel invariant violated at (n=" << n << ", s=" << states(n)[s]
              << ", a=" << actions_[a] << "): ";
        double total = 0.0;
        std::set<std::size_t> seen;
        for (const auto& t : outcomes) {
          if (t.next >= state_count(n + 1)) throw InputError(where.str() + "successor is not a stage-(n+1) state");
          if (!seen.insert(t.next).second) throw InputError(where.str() + "duplicate successor state");
          if (!std::isfinite(t.probability) || t.probability < 0.0)
            throw InputError(where.str() + "probabilities must be finite and >= 0");
          if (!std::isfinite(t.cost)) throw InputError(where.str() + "costs must be finite");
          total += t.probability;
        }
        if (std::abs(total - 1.0) > kProbabilityTolerance) {
          std::ostringstream msg;
          msg.precision(17);
          msg << where.str() << "probabilities sum to " << total << ", expected 1";
          throw InputError(msg.str());
        }
      }
      if (!any) {
        std::ostringstream msg;
        msg << "mdp: state " << states(n)[s] << " at stage " << n << " has no available action";
        throw InputError(msg.str());
      }
    }
  }
}

FiniteHorizonMdp FiniteHorizonMdp::with_discount(double lambda) const {
  FiniteHorizonMdp copy = *this;
  copy.discount_ = lambda;
  copy.validate();
  return copy;
}

FiniteHorizonMdp FiniteHorizonMdp::with_stage0_offset(double c) const {
  FiniteHorizonMdp copy = *this;
  for (auto& by_action : copy.kernel_[0])
    for (auto& outcomes : by_action)
      for (auto& t : outcomes) t.cost += c;
  copy.validate();
  return copy;
}

FiniteHorizonMdp FiniteHorizonMdp::subproblem(int stage, std::size_t state) const {
  if (stage < 0 || stage >= horizon_) throw InputError("mdp subproblem: stage outside [0, horizon)");
  if (state >= state_count(stage)) throw InputError("mdp subproblem: unknown state");
  FiniteHorizonMdp sub;
  const auto first = static_cast<std::ptrdiff_t>(stage);
  sub.horizon_ = horizon_ - stage;
  sub.actions_ = actions_;
  sub.states_.assign(states_.begin() + first, states_.end());
  sub.kernel_.assign(kernel_.begin() + first, kernel_.end());
  sub.initial_ = state;
  sub.discount_ = discount_;
  sub.validate();
  return sub;
}

std::vector<std::vector<bool>> FiniteHorizonMdp::reachable() const {
  std::vector<std::vector<bool>> out;
  for (int n = 0; n <= horizon_; ++n) out.emplace_back(state_count(n), false);
  out[0][initial_] = true;
  for (int n = 0; n < horizon_; ++n)
    for (std::size_t s = 0; s < state_count(n); ++s) {
      if (!out[static_cast<std::size_t>(n)][s]) continue;
      for (std::size_t a = 0; a < actions_.size(); ++a)
        for (const auto& t : kernel(n, s, a))
          if (t.probability > 0.0) out[static_cast<std::size_t>(n) + 1][t.next] = true;
    }
  return out;
}

// ---------------------------------------------------------------------------

Policy::Policy(const FiniteHorizonMdp& mdp) {
  for (int n = 0; n < mdp.horizon(); ++n) actions_.emplace_back(mdp.state_count(n));
}

std::optional<std::size_t> Policy::at(int stage, std::size_t state) const {
  if (stage < 0 || static_cast<std::size_t>(stage) >= actions_.size()) return std::nullopt;
  const auto& row = actions_[static_cast<std::size_t>(stage)];
  if (state >= row.size()) return std::nullopt;
  return row[state];
}

void Policy::set(int stage, std::size_t state, std::size_t action) {
  actions_.at(static_cast<std::size_t>(stage)).at(state) = action;
}

// ---------------------------------------------------------------------------

namespace {

void require_spec(const FiniteHorizonMdp& mdp, const IrmSpec& spec, int first_stage = 0) {
  if (spec.horizon() != mdp.horizon() - first_stage) {
    std::ostringstream msg;
    msg << "spec has " << spec.horizon() << " stages but the MDP horizon is " << mdp.horizon() - first_stage;
    throw InputError(msg.str());
  }
}

double backup(const FiniteHorizonMdp& mdp, const RiskFunctional& rho, int n, std::size_t s, std::size_t a,
              const std::vector<double>& next_values, std::vector<WeightedValue>& scratch) {
  scratch.clear();
  for (const auto& t : mdp.kernel(n, s, a))
    if (t.probability > 0.0) scratch.push_back({t.probability, t.cost + mdp.discount() * next_values[t.next]});
  return evaluate_discrete(rho, scratch);
}

ValueTable zero_table(const FiniteHorizonMdp& mdp) {
  ValueTable table;
  for (int n = 0; n <= mdp.horizon(); ++n) table.values.emplace_back(mdp.state_count(n), 0.0);
  return table;
}

}  // namespace

DpSolution solve_dp(const FiniteHorizonMdp& mdp, const IrmSpec& spec) {
  require_spec(mdp, spec);
  DpSolution out{zero_table(mdp), Policy(mdp)};
  std::vector<WeightedValue> scratch;
  for (int n = mdp.horizon() - 1; n >= 0; --n) {
    const auto& rho = spec.per_stage[static_cast<std::size_t>(n)];
    const auto& next = out.values.values[static_cast<std::size_t>(n) + 1];
    for (std::size_t s = 0; s < mdp.state_count(n); ++s) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_action = 0;
      for (std::size_t a = 0; a < mdp.actions().size(); ++a) {
        if (!mdp.available(n, s, a)) continue;
        const double v = backup(mdp, rho, n, s, a, next, scratch);
        if (v < best) {
          best = v;
          best_action = a;
        }
      }
      out.values.values[static_cast<std::size_t>(n)][s] = best;
      out.policy.set(n, s, best_action);
    }
  }
  return out;
}

ValueTable evaluate_policy(const FiniteHorizonMdp& mdp, const Policy& policy, const IrmSpec& spec) {
  require_spec(mdp, spec);
  ValueTable table = zero_table(mdp);
  std::vector<WeightedValue> scratch;
  for (int n = mdp.horizon() - 1; n >= 0; --n) {
    const auto& rho = spec.per_stage[static_cast<std::size_t>(n)];
    const auto& next = table.values[static_cast<std::size_t>(n) + 1];
    for (std::size_t s = 0; s < mdp.state_count(n); ++s) {
      const auto a = policy.at(n, s);
      if (!a) {
        std::ostringstream msg;
        msg << "evaluate_policy: missing policy entry at (n=" << n << ", s=" << mdp.states(n)[s] << ")";
        throw InputError(msg.str());
      }
      if (*a >= mdp.actions().size() || !mdp.available(n, s, *a))
        throw InputError("evaluate_policy: policy selects an unavailable action");
      table.values[static_cast<std::size_t>(n)][s] = backup(mdp, rho, n, s, *a, next, scratch);
    }
  }
  return table;
}

ScenarioTree unroll(const FiniteHorizonMdp& mdp, const Policy& policy, const UnrollOptions& options) {
  const int start = options.start_stage;
  if (start < 0 || start >= mdp.horizon()) throw InputError("unroll: start stage outside [0, horizon)");
  const std::size_t start_state = options.start_state.value_or(mdp.initial());
  if (start_state >= mdp.state_count(start)) throw InputError("unroll: unknown start state");

  ScenarioTree::Builder builder;
  struct Frame {
    NodeId node;
    int stage;
    std::size_t state;
  };
  std::vector<Frame> stack{{ScenarioTree::kRoot, start, start_state}};
  std::size_t nodes = 1;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.stage == mdp.horizon()) continue;
    const auto a = policy.at(f.stage, f.state);
    if (!a || *a >= mdp.actions().size() || !mdp.available(f.stage, f.state, *a)) {
      std::ostringstream msg;
      msg << "unroll: no valid policy entry at (n=" << f.stage << ", s=" << mdp.states(f.stage)[f.state] << ")";
      throw InputError(msg.str());
    }
    for (const auto& t : mdp.kernel(f.stage, f.state, *a)) {
      if (t.probability <= 0.0) continue;
      if (++nodes > options.node_cap) {
        std::ostringstream msg;
        msg << "unroll: tree exceeds the node cap of " << options.node_cap;
        throw ResourceError(msg.str());
      }
      stack.push_back({builder.add_child(f.node, t.probability, t.cost), f.stage + 1, t.next});
    }
  }
  return std::move(builder).build(mdp.horizon() - start);
}

// ---------------------------------------------------------------------------

namespace {

// Enumerates, in lexicographic order of the flattened policy, every
// assignment of the states reachable from the start; other entries keep the
// lowest available action.
class PolicyEnumerator {
 public:
  PolicyEnumerator(const FiniteHorizonMdp& mdp, int start_stage, std::size_t start_state)
      : mdp_(mdp), start_(start_stage), policy_(mdp) {
    for (int n = start_; n < mdp.horizon(); ++n)
      for (std::size_t s = 0; s < mdp.state_count(n); ++s) policy_.set(n, s, mdp.available_actions(n, s).front());
    first_states_ = {start_state};
  }

  void run(const std::function<void(const Policy&)>& visit) { recurse(start_, first_states_, visit); }

 private:
  void recurse(int n, const std::vector<std::size_t>& states, const std::function<void(const Policy&)>& visit) {
    if (n == mdp_.horizon()) {
      visit(policy_);
      return;
    }
    std::vector<std::vector<std::size_t>> choices;
    for (std::size_t s : states) choices.push_back(mdp_.available_actions(n, s));
    std::vector<std::size_t> digit(states.size(), 0);
    do {
      std::set<std::size_t> next;
      for (std::size_t i = 0; i < states.size(); ++i) {
        const std::size_t a = choices[i][digit[i]];
        policy_.set(n, states[i], a);
        for (const auto& t : mdp_.kernel(n, states[i], a))
          if (t.probability > 0.0) next.insert(t.next);
      }
      recurse(n + 1, std::vector<std::size_t>(next.begin(), next.end()), visit);
    } while (advance(digit, choices));
    for (std::size_t i = 0; i < states.size(); ++i) policy_.set(n, states[i], choices[i].front());
  }

  // Odometer step with the first state most significant; false on wrap.
  static bool advance(std::vector<std::size_t>& digit, const std::vector<std::vector<std::size_t>>& choices) {
    for (std::size_t i = digit.size(); i-- > 0;) {
      if (++digit[i] < choices[i].size()) return true;
      digit[i] = 0;
    }
    return false;
  }

  const FiniteHorizonMdp& mdp_;
  int start_;
  Policy policy_;
  std::vector<std::size_t> first_states_;
};

}  // namespace

BruteForceResult brute_force_optimal(const FiniteHorizonMdp& mdp, const IrmSpec& spec,
                                     const BruteForceOptions& options) {
  const int start = options.start_stage;
  if (start < 0 || start >= mdp.horizon()) throw InputError("brute_force_optimal: start stage outside [0, horizon)");
  require_spec(mdp, spec, start);
  const std::size_t start_state = options.start_state.value_or(mdp.initial());
  if (start_state >= mdp.state_count(start)) throw InputError("brute_force_optimal: unknown start state");

  double bound = 1.0;
  for (int n = start; n < mdp.horizon(); ++n)
    for (std::size_t s = 0; s < mdp.state_count(n); ++s)
      bound *= static_cast<double>(mdp.available_actions(n, s).size());
  if (bound > static_cast<double>(options.policy_cap)) {
    std::ostringstream msg;
    msg << "brute_force_optimal: " << bound << " candidate policies exceed the cap of " << options.policy_cap;
    throw ResourceError(msg.str());
  }

  const UnrollOptions unroll_options{.node_cap = 1'000'000, .start_stage = start, .start_state = start_state};
  PolicyEnumerator enumerator(mdp, start, start_state);

  if (options.execution == Execution::kSerial) {
    BruteForceResult best{std::numeric_limits<double>::infinity(), Policy(), 0};
    enumerator.run([&](const Policy& p) {
      const double v = irm_evaluate(unroll(mdp, p, unroll_options), spec, mdp.discount()).root_value;
      ++best.policies_scored;
      if (v < best.value) {
        best.value = v;
        best.policy = p;
      }
    });
    return best;
  }

  std::vector<Policy> candidates;
  enumerator.run([&](const Policy& p) { candidates.push_back(p); });
  const auto scores = kernels::score_policies(mdp, spec, candidates, unroll_options, options.execution);
  const std::size_t i = kernels::argmin_first(scores);
  return BruteForceResult{scores[i], candidates[i], candidates.size()};
}

}  // namespace irm
