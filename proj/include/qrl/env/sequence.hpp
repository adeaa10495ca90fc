#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrl {

// The agent's plan for one epoch: one action index per step.
struct ActionSequence {
  std::vector<std::uint32_t> steps;

  ActionSequence() = default;
  explicit ActionSequence(std::vector<std::uint32_t> s) : steps(std::move(s)) {}

  std::size_t size() const { return steps.size(); }
  std::uint32_t operator[](std::size_t i) const { return steps[i]; }

  friend bool operator==(const ActionSequence&, const ActionSequence&) = default;
};

// Percepts observed after each step plus the epoch's scalar reward.
struct EpochOutcome {
  std::vector<std::uint64_t> percepts;
  double reward = 0.0;

  friend bool operator==(const EpochOutcome&, const EpochOutcome&) = default;
};

// Shape of the action-sequence space of an epoch: per-step arities.
//
// Sequences are indexed in mixed radix with the first step most significant,
// so for binary arities the index is the bit string read as a number. Prefix
// ids number every prefix (including the empty one) breadth first starting
// at 1; for binary arities the id of prefix b_1..b_d is (1 << d) | bits.
class SequenceSpace {
 public:
  SequenceSpace() = default;
  explicit SequenceSpace(std::vector<std::uint32_t> arities);

  static SequenceSpace binary(std::size_t length);

  std::size_t epoch_length() const { return arities_.size(); }
  std::span<const std::uint32_t> arities() const { return arities_; }
  std::uint32_t arity(std::size_t step) const { return arities_[step]; }
  std::uint32_t max_arity() const { return max_arity_; }
  bool is_binary() const { return binary_; }

  // Number of complete sequences.
  std::uint64_t size() const { return size_; }

  void validate(const ActionSequence& a) const;
  std::uint64_t index_of(std::span<const std::uint32_t> steps) const;
  std::uint64_t index_of(const ActionSequence& a) const { return index_of(std::span(a.steps)); }
  ActionSequence sequence_at(std::uint64_t index) const;
  void sequence_at(std::uint64_t index, ActionSequence& out) const;

  std::uint64_t prefix_id(std::span<const std::uint32_t> prefix) const;

  friend bool operator==(const SequenceSpace&, const SequenceSpace&) = default;

 private:
  std::vector<std::uint32_t> arities_;
  std::vector<std::uint64_t> prefix_offsets_;
  std::uint64_t size_ = 1;
  std::uint32_t max_arity_ = 0;
  bool binary_ = true;
};

// "0110" style rendering for binary sequences.
std::string to_bitstring(const ActionSequence& a);
ActionSequence from_bitstring(std::string_view bits);

}  // namespace qrl
