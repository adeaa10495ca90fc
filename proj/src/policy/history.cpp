#include "qrl/policy/history.hpp"

#include <algorithm>

#include "qrl/errors.hpp"

namespace qrl {

void RewardedHistory::append(std::uint64_t sequence, double reward) {
  if (!(reward > 0.0)) throw ContractViolation("rewarded history only holds positive rewards");
  entries_.push_back({sequence, reward});
}

RewardedHistory RewardedHistory::truncated(std::size_t j) const {
  RewardedHistory out;
  const std::size_t n = std::min(j, entries_.size());
  out.entries_.assign(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

bool operator<(const RewardedHistory& a, const RewardedHistory& b) {
  return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
                                      [](const RewardedEntry& x, const RewardedEntry& y) {
                                        return x.sequence != y.sequence ? x.sequence < y.sequence : x.reward < y.reward;
                                      });
}

void replay(SequencePolicy& policy, const RewardedHistory& history, const DseEnvironment& env) {
  for (const auto& e : history.entries()) {
    const ActionSequence a = env.space().sequence_at(e.sequence);
    const EpochOutcome outcome = env.evaluate(a);
    if (outcome.reward != e.reward) throw ContractViolation("history reward disagrees with the environment");
    update_on_reward(policy, a, outcome);
  }
}

}  // namespace qrl
