#include "qrl/agents/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "qrl/stats/kahan.hpp"

namespace qrl::agents {

double IntervalSummary::stderr_t() const {
  return count > 1 ? std::sqrt(var_t / static_cast<double>(count)) : 0.0;
}

std::vector<IntervalSummary> epochs_to_reward_stats(std::span<const AgentTrace> traces) {
  std::size_t depth = 0;
  for (const auto& t : traces) depth = std::max(depth, t.rewards.size());
  std::vector<IntervalSummary> out(depth);
  for (std::size_t j = 0; j < depth; ++j) {
    auto& s = out[j];
    s.j = j;
    stats::KahanSum sum_t, sum_q, sum_inv, sum_inv_sqrt;
    s.min_q = 1.0;
    for (const auto& t : traces) {
      if (t.rewards.size() <= j) continue;
      const double len = static_cast<double>(t.interval_length(j));
      const double q = t.rewards[j].q_before;
      ++s.count;
      sum_t += len;
      sum_q += q;
      sum_inv += 1.0 / q;
      sum_inv_sqrt += 1.0 / std::sqrt(q);
      s.min_q = std::min(s.min_q, q);
      s.max_q = std::max(s.max_q, q);
    }
    const double n = static_cast<double>(s.count);
    s.mean_t = sum_t.value() / n;
    s.mean_q = sum_q.value() / n;
    s.mean_inv_q = sum_inv.value() / n;
    s.mean_inv_sqrt_q = sum_inv_sqrt.value() / n;
    if (s.count > 1) {
      stats::KahanSum ss;
      for (const auto& t : traces) {
        if (t.rewards.size() <= j) continue;
        const double d = static_cast<double>(t.interval_length(j)) - s.mean_t;
        ss += d * d;
      }
      s.var_t = ss.value() / (n - 1.0);
    }
  }
  return out;
}

}  // namespace qrl::agents
