#include "irm/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "irm/detail/overloaded.hpp"
#include "irm/error.hpp"

namespace irm::io {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

Json node_to_json(const ScenarioTree& tree, NodeId id) {
  const auto& node = tree.node(id);
  Json out = Json::object();
  Json children = Json::array();
  for (const auto& e : node.children)
    children.push_back({{"p", e.probability}, {"cost", e.cost}, {"node", node_to_json(tree, e.child)}});
  out["children"] = std::move(children);
  if (node.payoff) out["payoff"] = to_json(*node.payoff);
  return out;
}

void node_from_json(const Json& j, NodeId id, ScenarioTree::Builder& b, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  if (const auto it = j.find("children"); it != j.end()) {
    const auto& children = array(*it, where + "/children");
    for (std::size_t i = 0; i < children.size(); ++i) {
      const std::string w = where + "/children/" + std::to_string(i);
      const NodeId child = b.add_child(id, number(field(children[i], "p", w), w + "/p"),
                                       number(field(children[i], "cost", w), w + "/cost"));
      node_from_json(field(children[i], "node", w), child, b, w + "/node");
    }
  }
  if (const auto it = j.find("payoff"); it != j.end()) b.set_payoff(id, distribution_from_json(*it));
}

}  // namespace

Json parse(std::string_view input, std::string_view source) {
  try {
    return Json::parse(input.begin(), input.end());
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, input.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (input[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << source << ":" << line << ":" << column << ": JSON parse error";
    throw InputError(msg.str());
  }
}

Json load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

Json to_json(const MixedDistribution& dist) {
  Json components = Json::array();
  for (const auto& c : dist.components()) {
    std::visit(detail::Overloaded{
                   [&](const PointMass& pm) { components.push_back({{"w", c.weight}, {"point", pm.value}}); },
                   [&](const UniformSegment& u) {
                     components.push_back({{"w", c.weight}, {"uniform", Json::array({u.lo, u.hi})}});
                   },
               },
               c.outcome);
  }
  return {{"components", std::move(components)}};
}

MixedDistribution distribution_from_json(const Json& j) {
  const auto& list = array(field(j, "components", "distribution"), "distribution/components");
  std::vector<Component> components;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string w = "distribution/components/" + std::to_string(i);
    const double weight = number(field(list[i], "w", w), w + "/w");
    if (list[i].contains("point")) {
      components.push_back({weight, PointMass{number(list[i]["point"], w + "/point")}});
    } else if (list[i].contains("uniform")) {
      const auto& seg = array(list[i]["uniform"], w + "/uniform");
      if (seg.size() != 2) fail(w + "/uniform", "expected [lo, hi]");
      components.push_back({weight, UniformSegment{number(seg[0], w + "/uniform/0"),
                                                   number(seg[1], w + "/uniform/1")}});
    } else {
      fail(w, "expected \"point\" or \"uniform\"");
    }
  }
  return MixedDistribution(std::move(components));
}

Json to_json(const RiskFunctional& rf) {
  return std::visit(
      detail::Overloaded{
          [](const Expectation&) -> Json { return {{"kind", "mean"}}; },
          [](const EntropicRisk& e) -> Json { return {{"kind", "erm"}, {"gamma", e.gamma}}; },
          [](const ValueAtRisk& v) -> Json { return {{"kind", "var"}, {"alpha", v.alpha}}; },
          [](const ConditionalTailExpectation& c) -> Json { return {{"kind", "cte"}, {"alpha", c.alpha}}; },
          [](const Composite& c) -> Json {
            Json terms = Json::array();
            for (const auto& t : c.terms)
              terms.push_back({{"coefficient", t.coefficient}, {"functional", to_json(t.functional)}});
            return {{"kind", "composite"}, {"terms", std::move(terms)}};
          },
      },
      rf.kind());
}

RiskFunctional functional_from_json(const Json& j) {
  const std::string kind = text(field(j, "kind", "functional"), "functional/kind");
  if (kind == "mean") return RiskFunctional::expectation();
  if (kind == "erm") return RiskFunctional::entropic(number(field(j, "gamma", "functional"), "functional/gamma"));
  if (kind == "var")
    return RiskFunctional::value_at_risk(number(field(j, "alpha", "functional"), "functional/alpha"));
  if (kind == "cte") return RiskFunctional::cte(number(field(j, "alpha", "functional"), "functional/alpha"));
  if (kind == "composite") {
    const auto& list = array(field(j, "terms", "functional"), "functional/terms");
    std::vector<CompositeTerm> terms;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string w = "functional/terms/" + std::to_string(i);
      terms.push_back({number(field(list[i], "coefficient", w), w + "/coefficient"),
                       functional_from_json(field(list[i], "functional", w))});
    }
    return RiskFunctional::composite(std::move(terms));
  }
  fail("functional/kind", "unknown kind \"" + kind + "\" (mean, erm, var, cte, composite)");
}

Json to_json(const ScenarioTree& tree) {
  return {{"horizon", tree.horizon()}, {"root", node_to_json(tree, ScenarioTree::kRoot)}};
}

ScenarioTree tree_from_json(const Json& j) {
  const int horizon = integer(field(j, "horizon", "tree"), "tree/horizon");
  ScenarioTree::Builder b;
  node_from_json(field(j, "root", "tree"), ScenarioTree::kRoot, b, "tree/root");
  return std::move(b).build(horizon);
}

Json to_json(const FiniteHorizonMdp& mdp) {
  Json states = Json::array();
  for (int n = 0; n <= mdp.horizon(); ++n) states.push_back(mdp.states(n));
  Json transitions = Json::array();
  for (int n = 0; n < mdp.horizon(); ++n) {
    for (std::size_t s = 0; s < mdp.state_count(n); ++s) {
      for (std::size_t a = 0; a < mdp.actions().size(); ++a) {
        const auto& kernel = mdp.kernel(n, s, a);
        if (kernel.empty()) continue;
        Json to = Json::array();
        for (const auto& t : kernel)
          to.push_back({{"s'", mdp.states(n + 1)[t.next]}, {"p", t.probability}, {"r", t.cost}});
        transitions.push_back(
            {{"n", n}, {"s", mdp.states(n)[s]}, {"a", mdp.actions()[a]}, {"to", std::move(to)}});
      }
    }
  }
  return {{"horizon", mdp.horizon()},
          {"actions", mdp.actions()},
          {"states", std::move(states)},
          {"initial", mdp.states(0)[mdp.initial()]},
          {"lambda", mdp.discount()},
          {"transitions", std::move(transitions)}};
}

FiniteHorizonMdp mdp_from_json(const Json& j) {
  const int horizon = integer(field(j, "horizon", "mdp"), "mdp/horizon");
  if (horizon < 1) fail("mdp/horizon", "must be >= 1");
  std::vector<std::string> actions;
  const auto& action_list = array(field(j, "actions", "mdp"), "mdp/actions");
  for (std::size_t i = 0; i < action_list.size(); ++i)
    actions.push_back(text(action_list[i], "mdp/actions/" + std::to_string(i)));
  FiniteHorizonMdp::Builder b(horizon, actions);

  const auto& stages = array(field(j, "states", "mdp"), "mdp/states");
  if (stages.size() != static_cast<std::size_t>(horizon) + 1)
    fail("mdp/states", "expected horizon + 1 = " + std::to_string(horizon + 1) + " stages");
  std::vector<std::vector<std::string>> names(stages.size());
  for (std::size_t n = 0; n < stages.size(); ++n) {
    const std::string w = "mdp/states/" + std::to_string(n);
    const auto& list = array(stages[n], w);
    for (std::size_t s = 0; s < list.size(); ++s) {
      names[n].push_back(text(list[s], w + "/" + std::to_string(s)));
      b.add_state(static_cast<int>(n), names[n].back());
    }
  }
  const auto index_of = [&](std::size_t stage, const std::string& name, const std::string& where) {
    const auto& list = names.at(stage);
    const auto it = std::find(list.begin(), list.end(), name);
    if (it == list.end()) fail(where, "unknown state \"" + name + "\" at stage " + std::to_string(stage));
    return static_cast<std::size_t>(it - list.begin());
  };

  b.set_initial(index_of(0, text(field(j, "initial", "mdp"), "mdp/initial"), "mdp/initial"));
  if (j.contains("lambda")) b.set_discount(number(j["lambda"], "mdp/lambda"));

  const auto& transitions = array(field(j, "transitions", "mdp"), "mdp/transitions");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string w = "mdp/transitions/" + std::to_string(i);
    const auto& t = transitions[i];
    const int n = integer(field(t, "n", w), w + "/n");
    if (n < 0 || n >= horizon) fail(w + "/n", "stage out of range [0, horizon)");
    const auto stage = static_cast<std::size_t>(n);
    const std::size_t s = index_of(stage, text(field(t, "s", w), w + "/s"), w + "/s");
    const std::string action = text(field(t, "a", w), w + "/a");
    const auto a_it = std::find(actions.begin(), actions.end(), action);
    if (a_it == actions.end()) fail(w + "/a", "unknown action \"" + action + "\"");
    const auto a = static_cast<std::size_t>(a_it - actions.begin());
    const auto& to = array(field(t, "to", w), w + "/to");
    for (std::size_t k = 0; k < to.size(); ++k) {
      const std::string wk = w + "/to/" + std::to_string(k);
      // Successor under "s'"; plain "s" is accepted too.
      const char* key = to[k].is_object() && !to[k].contains("s'") && to[k].contains("s") ? "s" : "s'";
      b.add_transition(n, s, a, index_of(stage + 1, text(field(to[k], key, wk), wk + "/" + key), wk + "/" + key),
                       number(field(to[k], "p", wk), wk + "/p"), number(field(to[k], "r", wk), wk + "/r"));
    }
  }
  return std::move(b).build();
}

Json to_json(const FiniteHorizonMdp& mdp, const DpSolution& solution) {
  Json values = Json::array();
  Json policy = Json::array();
  for (int n = 0; n <= mdp.horizon(); ++n) {
    Json vrow = Json::object();
    Json prow = Json::object();
    for (std::size_t s = 0; s < mdp.state_count(n); ++s) {
      vrow[mdp.states(n)[s]] = solution.values.at(n, s);
      if (n < mdp.horizon()) {
        const auto a = solution.policy.at(n, s);
        prow[mdp.states(n)[s]] = a ? Json(mdp.actions()[*a]) : Json(nullptr);
      }
    }
    values.push_back(std::move(vrow));
    if (n < mdp.horizon()) policy.push_back(std::move(prow));
  }

  const auto reachable = mdp.reachable();
  Json trace = Json::array();
  for (int n = 0; n < mdp.horizon(); ++n) {
    for (std::size_t s = 0; s < mdp.state_count(n); ++s) {
      if (!reachable[static_cast<std::size_t>(n)][s]) continue;
      const auto a = solution.policy.at(n, s);
      trace.push_back({{"n", n},
                       {"s", mdp.states(n)[s]},
                       {"a", a ? Json(mdp.actions()[*a]) : Json(nullptr)},
                       {"value", solution.values.at(n, s)}});
    }
  }
  return {{"root_value", solution.values.at(0, mdp.initial())},
          {"root_action", mdp.actions()[solution.policy.at(0, mdp.initial()).value()]},
          {"values", std::move(values)},
          {"policy", std::move(policy)},
          {"trace", std::move(trace)}};
}

Json to_json(const PropertyReport& report) {
  Json out = {{"property", report.property},
              {"functional", report.functional},
              {"passed", report.passed},
              {"trials", report.trials},
              {"trials_run", report.trials_run}};
  if (report.counterexample) {
    const auto& c = *report.counterexample;
    Json ce = {{"x", to_json(c.x)}};
    if (c.y) ce["y"] = to_json(*c.y);
    ce["parameter"] = c.parameter;
    ce["lhs"] = c.lhs;
    ce["rhs"] = c.rhs;
    out["counterexample"] = std::move(ce);
  }
  return out;
}

}  // namespace irm::io
