#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrl/env/sequence.hpp"

namespace qrl {

inline constexpr std::uint64_t kDefaultEnumerationLimit = std::uint64_t{1} << 24;

// A deterministic strictly epochal environment: every epoch starts from the
// same initial percept and its percepts and reward are a pure function of the
// epoch's action sequence. Implementations are immutable after construction.
class DseEnvironment {
 public:
  virtual ~DseEnvironment() = default;

  const SequenceSpace& space() const { return space_; }
  std::size_t epoch_length() const { return space_.epoch_length(); }
  std::span<const std::uint32_t> step_arities() const { return space_.arities(); }

  // Validates `a` against the space; throws ContractViolation on mismatch.
  virtual EpochOutcome evaluate(const ActionSequence& a) const = 0;

  // Reward only, without building percepts. `a` must already be valid.
  virtual double reward(const ActionSequence& a) const { return evaluate(a).reward; }

  // Percept the epoch starts from.
  virtual std::uint64_t initial_percept() const { return 1; }

  // False only when no completion of `prefix` is rewarded. Environments for
  // which prunes_prefixes() is false answer true for every prefix.
  virtual bool may_reward(std::span<const std::uint32_t> prefix) const {
    (void)prefix;
    return true;
  }
  virtual bool prunes_prefixes() const { return false; }

 protected:
  explicit DseEnvironment(SequenceSpace space) : space_(std::move(space)) {}

 private:
  SequenceSpace space_;
};

// Exact count of sequences with reward > 0 by brute-force enumeration of the
// whole space. Throws NotEnumerable when the space exceeds `limit`.
std::uint64_t count_rewarded(const DseEnvironment& env, std::uint64_t limit = kDefaultEnumerationLimit);

// Indices of all rewarded sequences in ascending order. Uses prefix pruning
// when the environment supports it, so only the rewarded part of the space is
// visited; otherwise falls back to full enumeration under `limit`.
std::vector<std::uint64_t> rewarded_indices(const DseEnvironment& env,
                                            std::uint64_t limit = kDefaultEnumerationLimit);

}  // namespace qrl
