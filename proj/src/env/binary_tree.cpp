#include "qrl/env/binary_tree.hpp"

#include <algorithm>

#include "qrl/errors.hpp"
#include "qrl/rng.hpp"

namespace qrl {

BinaryTreeEnv::BinaryTreeEnv(std::size_t layers, std::size_t reward_exponent, ActionSequence correct_path)
    : DseEnvironment(SequenceSpace::binary(layers)),
      reward_exponent_(reward_exponent),
      correct_path_(std::move(correct_path)) {
  if (layers == 0 || layers > 62) throw ContractViolation("binary tree needs 1..62 layers");
  if (reward_exponent_ > layers) throw ContractViolation("reward exponent must not exceed the number of layers");
  space().validate(correct_path_);
}

BinaryTreeEnv BinaryTreeEnv::with_seeded_path(std::size_t layers, std::size_t reward_exponent,
                                              std::uint64_t path_seed) {
  Rng rng = derive_rng(path_seed, 0);
  ActionSequence path;
  path.steps.resize(layers);
  for (auto& s : path.steps) s = static_cast<std::uint32_t>(rng() >> 63);
  return BinaryTreeEnv(layers, reward_exponent, std::move(path));
}

std::size_t BinaryTreeEnv::correct_prefix_length(std::span<const std::uint32_t> a) const {
  const auto mismatch = std::mismatch(a.begin(), a.end(), correct_path_.steps.begin());
  return static_cast<std::size_t>(mismatch.first - a.begin());
}

std::uint64_t BinaryTreeEnv::integer_reward(const ActionSequence& a) const {
  const std::size_t x = correct_prefix_length(a.steps);
  if (x + reward_exponent_ < layers()) return 0;
  return std::uint64_t{1} << (reward_exponent_ + x - layers());
}

EpochOutcome BinaryTreeEnv::evaluate(const ActionSequence& a) const {
  space().validate(a);
  EpochOutcome out;
  out.percepts.reserve(a.size());
  std::uint64_t node = 1;
  for (std::uint32_t s : a.steps) {
    node = 2 * node + s;
    out.percepts.push_back(node);
  }
  out.reward = static_cast<double>(integer_reward(a));
  return out;
}

double BinaryTreeEnv::reward(const ActionSequence& a) const {
  return static_cast<double>(integer_reward(a));
}

bool BinaryTreeEnv::may_reward(std::span<const std::uint32_t> prefix) const {
  // Rewarded leaves are exactly those below the correct node at depth l - k.
  const std::size_t needed = std::min(prefix.size(), layers() - reward_exponent_);
  return correct_prefix_length(prefix.first(needed)) == needed;
}

}  // namespace qrl
