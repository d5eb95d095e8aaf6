// Serial against OpenMP timings for the parallel kernels. The second argument
// of every benchmark is 0 for serial and 1 for OpenMP.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "irm/kernels.hpp"
#include "irm/models.hpp"
#include "irm/random_models.hpp"

using namespace irm;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::kSerial : Execution::kOpenMp;
}

std::vector<double> centres(int steps) {
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) out.push_back((i + 0.5) / steps);
  return out;
}

void BM_PaymentGrid(benchmark::State& state) {
  const auto axis = centres(static_cast<int>(state.range(0)));
  const auto a = models::payment_a_tree();
  const auto b = models::payment_b_tree();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::payment_grid(a, b, axis, axis, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(axis.size() * axis.size()));
}
BENCHMARK(BM_PaymentGrid)->ArgsProduct({{50, 100, 200}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Lemma1Sweep(benchmark::State& state) {
  std::vector<double> gammas;
  const auto n = state.range(0);
  for (long i = 0; i < n; ++i) gammas.push_back(-5.0 + 10.0 * static_cast<double>(i) / static_cast<double>(n - 1));
  const std::vector<double> xs{0.25, 0.5, 1.0, 2.0, 3.0, 5.0};
  const std::vector<double> as{0.5, 1.0, 20.0};
  const std::vector<double> bs{-10.0, 0.0, 20.0};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::lemma1_sweep(xs, as, bs, gammas, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xs.size() * as.size() * bs.size()) * n);
}
BENCHMARK(BM_Lemma1Sweep)->ArgsProduct({{15, 150, 1500}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ScorePolicies(benchmark::State& state) {
  std::mt19937_64 rng(1);
  RandomMdpOptions o;
  o.max_horizon = 4;
  o.max_states = 4;
  o.max_actions = 3;
  const auto mdp = random_mdp(rng, o);
  std::vector<Policy> policies;
  for (long k = 0; k < state.range(0); ++k) {
    Policy p(mdp);
    for (int n = 0; n < mdp.horizon(); ++n)
      for (std::size_t s = 0; s < mdp.state_count(n); ++s) {
        const auto acts = mdp.available_actions(n, s);
        p.set(n, s, acts[rng() % acts.size()]);
      }
    policies.push_back(p);
  }
  const auto spec = IrmSpec::uniform(RiskFunctional::cte(0.7), mdp.horizon());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::score_policies(mdp, spec, policies, {}, mode(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScorePolicies)->ArgsProduct({{256, 4096}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
