#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrl/agents/trace.hpp"

namespace qrl::agents {

// Statistics of the epochs spent between consecutive rewards, grouped by
// interval index j (0-based; interval j ends with reward j).
struct IntervalSummary {
  std::size_t j = 0;
  std::uint64_t count = 0;  // traces that completed interval j
  double mean_t = 0.0;
  double var_t = 0.0;  // unbiased sample variance
  double mean_q = 0.0;
  double mean_inv_q = 0.0;       // mean of 1/Q_j, the expected classical mean
  double mean_inv_sqrt_q = 0.0;  // mean of 1/sqrt(Q_j)
  double min_q = 0.0;
  double max_q = 0.0;

  double stderr_t() const;
};

std::vector<IntervalSummary> epochs_to_reward_stats(std::span<const AgentTrace> traces);

}  // namespace qrl::agents
