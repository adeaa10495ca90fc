#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "qrl/amplify/backend.hpp"

namespace qrl::amplify {

struct SearchParams {
  double lambda = 6.0 / 5.0;
  std::uint32_t alpha_o = 2;
  // Cap on iterations per attempt (limited-coherence devices). 0 forces
  // classical attempts.
  std::optional<std::uint64_t> k_max;
  std::optional<std::uint64_t> attempt_budget;

  // Throws ContractViolation unless 1 < lambda < 4/3 and alpha_o >= 1.
  void validate() const;
};

struct SearchResult {
  std::optional<GroverOutcome> found;
  std::uint64_t total_epochs = 0;
  std::uint64_t attempts = 0;
  // Epochs spent on an attempt cut short by the epoch limit (counted in
  // total_epochs, never verified).
  std::uint64_t truncated_epochs = 0;
  bool budget_exhausted = false;
};

using AttemptObserver = std::function<void(const GroverOutcome&)>;

// Exponential search with unknown success probability: m starts at 1; each
// attempt draws k uniformly from {0, ..., ceil(m) - 1}, caps it at k_max,
// runs k iterations plus one verification epoch, and on failure sets
// m = min(lambda m, sqrt(1 / q_min)). Stops at the first reward, when the
// attempt budget runs out, or when the next attempt would exceed
// `epoch_limit` (the remaining epochs are then spent and reported as
// truncated).
SearchResult exponential_search(AmplificationBackend& backend, const SearchParams& params, double q_min, Rng& rng,
                                const AttemptObserver& on_attempt = {},
                                std::optional<std::uint64_t> epoch_limit = std::nullopt);

SearchResult exponential_search(const SequencePolicy& policy, const DseEnvironment& env, const SearchParams& params,
                                double q_min, Rng& rng, Backend backend = Backend::analytic);

}  // namespace qrl::amplify
