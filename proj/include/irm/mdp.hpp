#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "irm/execution.hpp"
#include "irm/scenario_tree.hpp"

namespace irm {

struct Transition {
  std::size_t next;
  double probability;
  double cost;
};

/// Finite-horizon MDP with stage-indexed state sets S_0 ... S_N.
///
/// kernel(n, s, a) lists the outcomes of taking a in s at stage n; an empty
/// list means a is unavailable there. Every (n < N, s) has at least one
/// available action.
class FiniteHorizonMdp {
 public:
  class Builder {
   public:
    Builder(int horizon, std::vector<std::string> actions);
    std::size_t add_state(int stage, std::string name);
    void set_initial(std::size_t state) { initial_ = state; }
    void set_discount(double lambda) { discount_ = lambda; }
    void add_transition(int stage, std::size_t state, std::size_t action, std::size_t next,
                        double probability, double cost);
    FiniteHorizonMdp build() &&;

   private:
    int horizon_;
    std::vector<std::string> actions_;
    std::vector<std::vector<std::string>> states_;
    struct Pending {
      int stage;
      std::size_t state;
      std::size_t action;
      Transition transition;
    };
    std::vector<Pending> pending_;
    std::size_t initial_ = 0;
    double discount_ = 1.0;
  };

  int horizon() const { return horizon_; }
  double discount() const { return discount_; }
  std::size_t initial() const { return initial_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::string>& states(int stage) const { return states_.at(static_cast<std::size_t>(stage)); }
  std::size_t state_count(int stage) const { return states(stage).size(); }

  const std::vector<Transition>& kernel(int stage, std::size_t state, std::size_t action) const;
  bool available(int stage, std::size_t state, std::size_t action) const {
    return !kernel(stage, state, action).empty();
  }
  std::vector<std::size_t> available_actions(int stage, std::size_t state) const;

  std::optional<std::size_t> find_state(int stage, const std::string& name) const;
  std::optional<std::size_t> find_action(const std::string& name) const;

  // Copy with a different discount factor.
  FiniteHorizonMdp with_discount(double lambda) const;
  // Copy with c added to every stage-0 cost.
  FiniteHorizonMdp with_stage0_offset(double c) const;
  // The MDP started at (stage, state): horizon N - stage, that state initial.
  FiniteHorizonMdp subproblem(int stage, std::size_t state) const;

  // reachable[n][s]: some policy can reach (n, s) from the initial state.
  std::vector<std::vector<bool>> reachable() const;

 private:
  FiniteHorizonMdp() = default;
  void validate() const;

  int horizon_ = 0;
  std::vector<std::string> actions_;
  std::vector<std::vector<std::string>> states_;
  std::vector<std::vector<std::vector<std::vector<Transition>>>> kernel_;
  std::size_t initial_ = 0;
  double discount_ = 1.0;
};

// Deterministic Markov policy: action index per (stage, state).
class Policy {
 public:
  Policy() = default;
  explicit Policy(const FiniteHorizonMdp& mdp);

  std::optional<std::size_t> at(int stage, std::size_t state) const;
  void set(int stage, std::size_t state, std::size_t action);
  int horizon() const { return static_cast<int>(actions_.size()); }

  bool operator==(const Policy&) const = default;
  // Flattened stage-major order; unset entries sort first.
  bool operator<(const Policy& other) const { return actions_ < other.actions_; }

  const std::vector<std::vector<std::optional<std::size_t>>>& table() const { return actions_; }

 private:
  std::vector<std::vector<std::optional<std::size_t>>> actions_;
};

// values[n][s]; the stage-N row is all zeros.
struct ValueTable {
  std::vector<std::vector<double>> values;

  double at(int stage, std::size_t state) const {
    return values.at(static_cast<std::size_t>(stage)).at(state);
  }
};

struct DpSolution {
  ValueTable values;
  Policy policy;
};

/// Backward induction
///   V_N = 0,  V_n(s) = min_a rho_n[ D{ r_n(s', s, a) + lambda V_{n+1}(s'), p_n(s' | s, a) } ].
///
/// Optimal over Markov policies when every rho_n is monotone, translation
/// invariant and positive homogeneous (or lambda == 1 without homogeneity).
/// The recursion runs for any spec; otherwise the result is the recursive
/// optimum, not the optimum of the flat measure. Ties go to the lowest action
/// index.
DpSolution solve_dp(const FiniteHorizonMdp& mdp, const IrmSpec& spec);

// Same recursion with actions fixed by `policy` (which must be total).
ValueTable evaluate_policy(const FiniteHorizonMdp& mdp, const Policy& policy, const IrmSpec& spec);

struct UnrollOptions {
  std::size_t node_cap = 1'000'000;
  int start_stage = 0;
  // Defaults to the MDP's initial state.
  std::optional<std::size_t> start_state;
};

// Scenario tree of the process under `policy`; zero-probability transitions
// are dropped.
ScenarioTree unroll(const FiniteHorizonMdp& mdp, const Policy& policy, const UnrollOptions& options = {});

struct BruteForceOptions {
  std::size_t policy_cap = 1'000'000;
  int start_stage = 0;
  std::optional<std::size_t> start_state;
  Execution execution = Execution::kSerial;
};

struct BruteForceResult {
  double value;
  Policy policy;
  std::size_t policies_scored;
};

/// Scores every deterministic Markov policy by irm_evaluate on its unrolled
/// tree and returns the minimizer, lexicographically smallest among ties.
///
/// Entries at states unreachable under a policy do not change its score, so
/// only reachable entries are enumerated and the rest take the lowest
/// available action. The cap applies to prod_{(n, s)} |A(n, s)|.
BruteForceResult brute_force_optimal(const FiniteHorizonMdp& mdp, const IrmSpec& spec,
                                     const BruteForceOptions& options = {});

}  // namespace irm
