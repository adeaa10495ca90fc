#pragma once

#include <unordered_map>

#include "qrl/policy/policy.hpp"

namespace qrl {

// Snapshot of a policy's rewarded mass per prefix, for drawing sequences
// conditioned on being rewarded (or on not being rewarded) in O(L) per draw.
//
// Stores, for every prefix whose subtree holds rewarded sequences, the
// conditional probability of ending rewarded given the prefix was reached.
// The snapshot copies the policy, so later updates do not affect it.
class RewardedMassTree {
 public:
  RewardedMassTree(const SequencePolicy& policy, const DseEnvironment& env,
                   std::uint64_t limit = kDefaultEnumerationLimit);

  // Q, the total rewarded mass.
  double total() const { return total_; }
  const SequencePolicy& policy() const { return *policy_; }

  // Draws a ∝ policy mass restricted to rewarded sequences. Requires total() > 0.
  void sample_rewarded(Rng& rng, ActionSequence& out) const;
  // Draws a ∝ policy mass restricted to unrewarded sequences. Requires total() < 1.
  void sample_unrewarded(Rng& rng, ActionSequence& out) const;

 private:
  double build(const DseEnvironment& env, ActionSequence& prefix, PolicyState state, std::size_t depth);
  double mass(std::span<const std::uint32_t> prefix) const;
  void sample(Rng& rng, ActionSequence& out, bool rewarded) const;

  std::unique_ptr<SequencePolicy> policy_;
  std::unordered_map<std::uint64_t, double> mass_;
  std::vector<double> scratch_;
  double total_ = 0.0;
};

}  // namespace qrl
