#pragma once

#include <cstdint>

#include "qrl/env/environment.hpp"
#include "qrl/policy/policy.hpp"
#include "qrl/stats/distribution.hpp"

namespace qrl::verify {

// Rewarded-history distribution of the classical agent by epoch-level forward
// evolution: every pending history is advanced one epoch at a time over all
// sequences of the space, until the probability mass still waiting for its
// next reward is below `residual`. Independent of the product formula; never
// divides by Q.
stats::HistoryDistribution epoch_level_history_distribution(const SequencePolicy& initial_policy,
                                                            const DseEnvironment& env, std::size_t J,
                                                            double residual = 1e-15,
                                                            std::uint64_t max_epochs = 100'000);

// Sum over all sequences of reward times policy probability, by full
// enumeration.
double expected_reward(const SequencePolicy& policy, const DseEnvironment& env);

}  // namespace qrl::verify
