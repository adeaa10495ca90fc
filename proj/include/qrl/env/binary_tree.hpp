#pragma once

#include <cstdint>

#include "qrl/env/environment.hpp"

namespace qrl {

// Binary decision tree with `layers` sequential binary choices per epoch.
//
// The correct path earns 2^k. Leaving it after x correct decisions earns
// floor(2^(k + x - layers)), so exactly 2^k leaves are rewarded. Percepts are
// the ids of the visited nodes, i.e. (1 << depth) | prefix bits.
class BinaryTreeEnv final : public DseEnvironment {
 public:
  BinaryTreeEnv(std::size_t layers, std::size_t reward_exponent, ActionSequence correct_path);

  // Correct path drawn from derive_rng(path_seed, 0).
  static BinaryTreeEnv with_seeded_path(std::size_t layers, std::size_t reward_exponent,
                                        std::uint64_t path_seed);

  std::size_t layers() const { return epoch_length(); }
  std::size_t reward_exponent() const { return reward_exponent_; }
  const ActionSequence& correct_path() const { return correct_path_; }

  // Length of the longest prefix of `a` agreeing with the correct path.
  std::size_t correct_prefix_length(std::span<const std::uint32_t> a) const;
  std::uint64_t integer_reward(const ActionSequence& a) const;

  EpochOutcome evaluate(const ActionSequence& a) const override;
  double reward(const ActionSequence& a) const override;
  bool may_reward(std::span<const std::uint32_t> prefix) const override;
  bool prunes_prefixes() const override { return true; }

 private:
  std::size_t reward_exponent_;
  ActionSequence correct_path_;
};

}  // namespace qrl
