#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "irm/distribution.hpp"
#include "irm/mdp.hpp"
#include "irm/property_checks.hpp"
#include "irm/risk_measures.hpp"
#include "irm/scenario_tree.hpp"

// JSON encodings of the library types. Decoders throw irm::InputError with a
// JSON-pointer-like location; text parse errors carry line and column.
//
//   distribution  {"components": [{"w": 0.9, "point": 10}, {"w": 0.1, "uniform": [20, 80]}]}
//   functional    {"kind": "cte", "alpha": 0.5} | {"kind": "composite", "terms": [{"coefficient": c, "functional": {...}}]}
//   tree          {"horizon": N, "root": {"children": [{"p": p, "cost": c, "node": {...}}], "payoff": {...}}}
//   mdp           {"horizon": N, "actions": [...], "states": [[...], ...], "initial": "s", "lambda": l,
//                  "transitions": [{"n": 0, "s": "s", "a": "a", "to": [{"s'": "t", "p": p, "r": c}]}]}
namespace irm::io {

using Json = nlohmann::ordered_json;

// Parses text; `source` names the input in error messages.
Json parse(std::string_view text, std::string_view source = "<input>");
// Reads and parses a file.
Json load_file(const std::string& path);

Json to_json(const MixedDistribution& dist);
MixedDistribution distribution_from_json(const Json& j);

Json to_json(const RiskFunctional& rf);
RiskFunctional functional_from_json(const Json& j);

Json to_json(const ScenarioTree& tree);
ScenarioTree tree_from_json(const Json& j);

Json to_json(const FiniteHorizonMdp& mdp);
FiniteHorizonMdp mdp_from_json(const Json& j);

// Values, policy by action name, and a per-stage trace of the reachable states.
Json to_json(const FiniteHorizonMdp& mdp, const DpSolution& solution);

Json to_json(const PropertyReport& report);

}  // namespace irm::io
