#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrl/env/environment.hpp"
#include "qrl/env/sequence.hpp"
#include "qrl/rng.hpp"

namespace qrl {

// Cursor a policy uses to locate the decision after a prefix: a tree node id
// or a percept id, depending on the policy.
using PolicyState = std::uint64_t;

// A per-epoch policy that factorizes over steps: the probability of a full
// sequence is the product of the step distributions met along its prefix.
//
// Policies are single-owner mutable state; updates happen only on rewarded
// epochs via update_on_reward().
class SequencePolicy {
 public:
  virtual ~SequencePolicy() = default;

  const SequenceSpace& space() const { return space_; }

  virtual PolicyState root_state() const = 0;
  virtual PolicyState child_state(PolicyState state, std::uint32_t action) const = 0;

  // Writes the distribution over actions at `state`; `out` has the arity of
  // the step being decided.
  virtual void step_probabilities(PolicyState state, std::span<double> out) const = 0;

  // True when every step distribution at or below `state` is uniform.
  virtual bool uniform_below(PolicyState state) const = 0;

  virtual void sample_into(Rng& rng, ActionSequence& out) const;

  virtual std::unique_ptr<SequencePolicy> clone() const = 0;

  // Structured text dump of the learnable state, exact under round trip.
  virtual void dump(std::ostream& os) const = 0;

 protected:
  explicit SequencePolicy(SequenceSpace space) : space_(std::move(space)) {}

  friend void update_on_reward(SequencePolicy&, const ActionSequence&, const EpochOutcome&);
  virtual void apply_reward(const ActionSequence& a, const EpochOutcome& outcome) = 0;

 private:
  SequenceSpace space_;
};

// 0.5 + 0.5 tanh(beta (h_chosen - h_other)) for the binary decision at a node
// carrying h-values `h` = (h of child 0, h of child 1). The two choices sum to
// exactly 1 and the smaller one stays positive while representable.
double decision_probability(std::pair<double, double> h, int chosen, double beta);

double sequence_probability(const SequencePolicy& policy, const ActionSequence& a);

ActionSequence sample_sequence(const SequencePolicy& policy, Rng& rng);

// Probability of every sequence, indexed by sequence index.
std::vector<double> enumerate_probabilities(const SequencePolicy& policy,
                                            std::uint64_t limit = kDefaultEnumerationLimit);

// Q = sum of policy mass over rewarded sequences. Walks only subtrees that may
// contain rewards when the environment supports pruning; otherwise enumerates
// under `limit` and throws NotEnumerable beyond it.
double winning_probability(const SequencePolicy& policy, const DseEnvironment& env,
                           std::uint64_t limit = kDefaultEnumerationLimit);

// min over sequences of the policy probability, a lower bound on Q whenever at
// least one rewarded sequence exists.
double q_min_bound(const SequencePolicy& policy);

// Applies the policy's update for a rewarded epoch. Throws ContractViolation
// unless outcome.reward > 0.
void update_on_reward(SequencePolicy& policy, const ActionSequence& a, const EpochOutcome& outcome);

}  // namespace qrl
