#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <string>

#include "irm/error.hpp"
#include "irm/json_io.hpp"
#include "irm/mdp.hpp"
#include "irm/models.hpp"
#include "irm/random_models.hpp"

using namespace irm;
using irm::io::Json;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(JsonDistribution, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto d = random_distribution(rng);
    const auto back = io::distribution_from_json(io::parse(io::to_json(d).dump()));
    ASSERT_EQ(back.size(), d.size());
    for (double y : {-11.0, -3.3, 0.0, 2.5, 9.9}) EXPECT_DOUBLE_EQ(cdf(back, y), cdf(d, y));
  }
}

TEST(JsonDistribution, Errors) {
  EXPECT_NE(error_of([] { io::distribution_from_json(Json::parse(R"({"components":[{"w":1}]})")); })
                .find("distribution/components/0"),
            std::string::npos);
  EXPECT_NE(error_of([] { io::distribution_from_json(Json::parse(R"({"components":[{"w":"x","point":1}]})")); })
                .find("distribution/components/0/w: expected a number"),
            std::string::npos);
  EXPECT_NE(error_of([] { io::distribution_from_json(Json::parse(R"({"components":[{"w":1,"uniform":[1]}]})")); })
                .find("expected [lo, hi]"),
            std::string::npos);
  EXPECT_THROW(io::distribution_from_json(Json::parse(R"({"components":[{"w":0.5,"point":1}]})")), InputError);
}

TEST(JsonFunctional, RoundTripAndErrors) {
  const auto rf = RiskFunctional::composite({{0.25, RiskFunctional::entropic(0.1)},
                                             {0.75, RiskFunctional::mean_cte_blend(0.5, 0.9)}});
  const auto back = io::functional_from_json(io::to_json(rf));
  EXPECT_EQ(back.describe(), rf.describe());
  EXPECT_EQ(io::to_json(back).dump(), io::to_json(rf).dump());
  EXPECT_NE(error_of([] { io::functional_from_json(Json::parse(R"({"kind":"median"})")); }).find("unknown kind"),
            std::string::npos);
  EXPECT_THROW(io::functional_from_json(Json::parse(R"({"kind":"cte","alpha":1.0})")), InputError);
}

TEST(JsonTree, RoundTripPreservesValues) {
  for (const auto& tree : {models::travel_tree_p(), models::payment_b_tree(), models::payment_y_tree()}) {
    const auto back = io::tree_from_json(io::parse(io::to_json(tree).dump()));
    const auto spec = IrmSpec::uniform(RiskFunctional::cte(0.7), tree.horizon());
    EXPECT_DOUBLE_EQ(irm_evaluate(back, spec, 0.9).root_value, irm_evaluate(tree, spec, 0.9).root_value);
    EXPECT_EQ(back.size(), tree.size());
  }
}

TEST(JsonMdp, RoundTripPreservesSolution) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    RandomMdpOptions o;
    o.discount = 0.8;
    const auto mdp = random_mdp(rng, o);
    const auto back = io::mdp_from_json(io::parse(io::to_json(mdp).dump()));
    const auto spec = IrmSpec::uniform(RiskFunctional::cte(0.6), mdp.horizon());
    EXPECT_EQ(solve_dp(back, spec).values.values, solve_dp(mdp, spec).values.values);
    EXPECT_EQ(back.discount(), mdp.discount());
  }
}

TEST(JsonMdp, SuccessorKeyAndAlias) {
  const auto text = R"({"horizon":1,"actions":["go"],"states":[["s"],["t"]],"initial":"s","lambda":1,
    "transitions":[{"n":0,"s":"s","a":"go","to":[{"s":"t","p":1,"r":4}]}]})";
  const auto mdp = io::mdp_from_json(io::parse(text));
  EXPECT_EQ(mdp.kernel(0, 0, 0).front().cost, 4.0);
  const auto j = io::to_json(mdp);
  EXPECT_TRUE(j["transitions"][0]["to"][0].contains("s'"));
}

TEST(JsonMdp, ErrorsNameTheLocation) {
  const auto msg = error_of([] {
    io::mdp_from_json(io::parse(R"({"horizon":1,"actions":["go"],"states":[["s"],["t"]],"initial":"s","lambda":1,
      "transitions":[{"n":0,"s":"s","a":"go","to":[{"s'":"t","p":"one","r":4}]}]})"));
  });
  EXPECT_NE(msg.find("mdp/transitions/0/to/0/p: expected a number"), std::string::npos) << msg;
  const auto unknown = error_of([] {
    io::mdp_from_json(io::parse(R"({"horizon":1,"actions":["go"],"states":[["s"],["t"]],"initial":"s","lambda":1,
      "transitions":[{"n":0,"s":"s","a":"stay","to":[{"s'":"t","p":1,"r":4}]}]})"));
  });
  EXPECT_NE(unknown.find("unknown action \"stay\""), std::string::npos) << unknown;
  const auto kernel = error_of([] {
    io::mdp_from_json(io::parse(R"({"horizon":1,"actions":["go"],"states":[["s"],["t","u"]],"initial":"s","lambda":1,
      "transitions":[{"n":0,"s":"s","a":"go","to":[{"s'":"t","p":0.5,"r":4},{"s'":"u","p":0.4,"r":0}]}]})"));
  });
  EXPECT_NE(kernel.find("probabilities sum to"), std::string::npos) << kernel;
}

TEST(JsonParse, ReportsLineAndColumn) {
  const auto msg = error_of([] { io::parse("{\n  \"horizon\": ,\n}", "bad.json"); });
  EXPECT_EQ(msg.rfind("bad.json:2:", 0), 0u) << msg;
  EXPECT_NE(msg.find("JSON parse error"), std::string::npos);
  EXPECT_THROW(io::load_file("/nonexistent/file.json"), InputError);
}

TEST(JsonSolution, ContainsRootAndTrace) {
  const auto mdp = models::payments_mdp(0.95);
  const auto sol = solve_dp(mdp, IrmSpec::uniform(RiskFunctional::cte(0.9), 20));
  const auto j = io::to_json(mdp, sol);
  EXPECT_EQ(j["root_action"], "A");
  EXPECT_EQ(j["root_value"].get<double>(), 1000.0);
  EXPECT_EQ(j["values"].size(), 21u);
  EXPECT_EQ(j["policy"].size(), 20u);
  EXPECT_FALSE(j["trace"].empty());
}
