#include "irm/kernels.hpp"

#include <exception>
#include <mutex>

#include "irm/models.hpp"
#include "irm/risk_measures.hpp"

namespace irm::kernels {
namespace {

// First exception raised inside a parallel region, rethrown after it.
class ErrorSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace

std::vector<double> score_policies(const FiniteHorizonMdp& mdp, const IrmSpec& spec,
                                   std::span<const Policy> policies, const UnrollOptions& unroll_options,
                                   Execution execution) {
  const auto n = static_cast<std::ptrdiff_t>(policies.size());
  std::vector<double> scores(policies.size());
  const auto score = [&](std::ptrdiff_t i) {
    scores[static_cast<std::size_t>(i)] =
        irm_evaluate(unroll(mdp, policies[static_cast<std::size_t>(i)], unroll_options), spec, mdp.discount())
            .root_value;
  };
  if (execution == Execution::kSerial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) score(i);
    return scores;
  }
  ErrorSlot errors;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) errors.run([&] { score(i); });
  errors.rethrow();
  return scores;
}

std::size_t argmin_first(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] < scores[best]) best = i;
  return best;
}

std::vector<PaymentComparison> payment_grid(const ScenarioTree& tree_a, const ScenarioTree& tree_b,
                                            std::span<const double> lambdas,
                                            std::span<const double> alphas, Execution execution) {
  const std::size_t cols = alphas.size();
  const auto cells = static_cast<std::ptrdiff_t>(lambdas.size() * cols);
  std::vector<PaymentComparison> out(static_cast<std::size_t>(cells));
  const auto fill = [&](std::ptrdiff_t k) {
    const auto idx = static_cast<std::size_t>(k);
    const double lambda = lambdas[idx / cols];
    const auto spec_a = IrmSpec::uniform(RiskFunctional::cte(alphas[idx % cols]), tree_a.horizon());
    const auto spec_b = IrmSpec::uniform(RiskFunctional::cte(alphas[idx % cols]), tree_b.horizon());
    out[idx] = {irm_evaluate(tree_a, spec_a, lambda).root_value, irm_evaluate(tree_b, spec_b, lambda).root_value};
  };
  if (execution == Execution::kSerial) {
    for (std::ptrdiff_t k = 0; k < cells; ++k) fill(k);
    return out;
  }
  ErrorSlot errors;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < cells; ++k) errors.run([&] { fill(k); });
  errors.rethrow();
  return out;
}

std::vector<Lemma1Point> lemma1_sweep(std::span<const double> xs, std::span<const double> as,
                                      std::span<const double> bs, std::span<const double> gammas,
                                      Execution execution) {
  const std::size_t per_x = as.size() * bs.size() * gammas.size();
  const auto total = static_cast<std::ptrdiff_t>(xs.size() * per_x);
  std::vector<Lemma1Point> out(static_cast<std::size_t>(total));
  const auto fill = [&](std::ptrdiff_t k) {
    auto idx = static_cast<std::size_t>(k);
    const std::size_t g = idx % gammas.size();
    idx /= gammas.size();
    const std::size_t ib = idx % bs.size();
    idx /= bs.size();
    const std::size_t ia = idx % as.size();
    const std::size_t ix = idx / as.size();
    const auto [x_law, y_law] = models::erm_ordering_pair(xs[ix]);
    const double gamma = gammas[g];
    out[static_cast<std::size_t>(k)] = {xs[ix],
                                        as[ia],
                                        bs[ib],
                                        gamma,
                                        erm(gamma, affine_transform(x_law, as[ia], bs[ib])),
                                        erm(gamma, affine_transform(y_law, as[ia], bs[ib]))};
  };
  if (execution == Execution::kSerial) {
    for (std::ptrdiff_t k = 0; k < total; ++k) fill(k);
    return out;
  }
  ErrorSlot errors;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < total; ++k) errors.run([&] { fill(k); });
  errors.rethrow();
  return out;
}

}  // namespace irm::kernels
