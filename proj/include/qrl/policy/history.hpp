#pragma once

#include <cstdint>
#include <vector>

#include "qrl/policy/policy.hpp"

namespace qrl {

// One rewarded epoch: the played sequence (by index in the sequence space)
// and its reward.
struct RewardedEntry {
  std::uint64_t sequence = 0;
  double reward = 0.0;

  friend bool operator==(const RewardedEntry&, const RewardedEntry&) = default;
};

// An agent's history reduced to rewarded epochs. For the agents simulated
// here it fully determines the policy state.
class RewardedHistory {
 public:
  void append(std::uint64_t sequence, double reward);

  const std::vector<RewardedEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const RewardedEntry& operator[](std::size_t j) const { return entries_[j]; }

  // First `j` entries.
  RewardedHistory truncated(std::size_t j) const;

  friend bool operator==(const RewardedHistory&, const RewardedHistory&) = default;
  friend bool operator<(const RewardedHistory& a, const RewardedHistory& b);

 private:
  std::vector<RewardedEntry> entries_;
};

// Applies every entry of `history` to `policy` in order. Each entry is
// re-evaluated on `env` for its percepts; a reward mismatch throws.
void replay(SequencePolicy& policy, const RewardedHistory& history, const DseEnvironment& env);

}  // namespace qrl
