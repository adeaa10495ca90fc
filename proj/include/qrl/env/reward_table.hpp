#pragma once

#include <filesystem>
#include <map>
#include <unordered_set>

#include "qrl/env/environment.hpp"

namespace qrl {

// Small DSE environment given by an explicit table of rewarded sequences.
// Sequences absent from the table earn 0. Percepts are prefix ids, as in the
// binary tree.
class RewardTableEnv final : public DseEnvironment {
 public:
  // `rewards` maps sequence index to a strictly positive reward and must not
  // be empty.
  RewardTableEnv(SequenceSpace space, std::map<std::uint64_t, double> rewards);

  const std::map<std::uint64_t, double>& table() const { return rewards_; }

  EpochOutcome evaluate(const ActionSequence& a) const override;
  double reward(const ActionSequence& a) const override;
  bool may_reward(std::span<const std::uint32_t> prefix) const override;
  bool prunes_prefixes() const override { return true; }

 private:
  std::map<std::uint64_t, double> rewards_;
  std::unordered_set<std::uint64_t> rewarded_prefixes_;
};

// Parses the "bitstring,reward" table format: one rewarded sequence per line,
// '#' starts a comment, blank lines are ignored, all bit strings share one
// length.
RewardTableEnv parse_reward_table(std::string_view text);
RewardTableEnv load_reward_table(const std::filesystem::path& path);

}  // namespace qrl
