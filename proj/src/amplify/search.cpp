#include "qrl/amplify/search.hpp"

#include <cmath>
#include <random>

#include "qrl/errors.hpp"

namespace qrl::amplify {

void SearchParams::validate() const {
  if (!(lambda > 1.0 && lambda < 4.0 / 3.0)) throw ContractViolation("lambda must lie in (1, 4/3)");
  if (alpha_o < 1) throw ContractViolation("alpha_o must be at least 1");
}

SearchResult exponential_search(AmplificationBackend& backend, const SearchParams& params, double q_min, Rng& rng,
                                const AttemptObserver& on_attempt, std::optional<std::uint64_t> epoch_limit) {
  params.validate();
  if (!(q_min > 0.0 && q_min <= 1.0)) throw ContractViolation("q_min must lie in (0, 1]");
  const double m_cap = std::sqrt(1.0 / q_min);
  double m = 1.0;
  SearchResult result;
  while (true) {
    if (params.attempt_budget && result.attempts >= *params.attempt_budget) {
      result.budget_exhausted = true;
      return result;
    }
    const auto upper = static_cast<std::uint64_t>(std::ceil(m)) - 1;
    std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(0, upper)(rng);
    if (params.k_max) k = std::min(k, *params.k_max);
    const std::uint64_t cost = epochs_for(k, params.alpha_o);
    if (epoch_limit && result.total_epochs + cost > *epoch_limit) {
      result.truncated_epochs = *epoch_limit - result.total_epochs;
      result.total_epochs = *epoch_limit;
      result.budget_exhausted = true;
      return result;
    }
    GroverOutcome outcome = backend.run(k, rng);
    ++result.attempts;
    result.total_epochs += outcome.epochs_consumed;
    if (on_attempt) on_attempt(outcome);
    if (outcome.rewarded) {
      result.found = std::move(outcome);
      return result;
    }
    m = std::min(params.lambda * m, m_cap);
  }
}

SearchResult exponential_search(const SequencePolicy& policy, const DseEnvironment& env, const SearchParams& params,
                                double q_min, Rng& rng, Backend backend) {
  auto impl = make_backend(backend, policy, env, params.alpha_o);
  return exponential_search(*impl, params, q_min, rng);
}

}  // namespace qrl::amplify
