#pragma once

#include <array>
#include <vector>

#include "qrl/policy/policy.hpp"

namespace qrl {

// Softmax h-value agent on a binary tree of `layers` decisions.
//
// Every node (prefix of length 0..layers-1) holds one h-value per child; a
// rewarded epoch adds its reward to every h along the played path. Node ids
// follow the percept encoding: root 1, children 2n and 2n+1.
class HValueTreePolicy final : public SequencePolicy {
 public:
  static constexpr std::size_t kMaxLayers = 20;

  HValueTreePolicy(std::size_t layers, double beta, double initial_h = 0.0);

  std::size_t layers() const { return space().epoch_length(); }
  double beta() const { return beta_; }
  double initial_h() const { return initial_h_; }

  std::pair<double, double> h(std::uint64_t node) const;
  // Overrides the h-values of one node (test and synthetic-policy helper).
  void set_h(std::uint64_t node, std::pair<double, double> values);
  double probability(std::uint64_t node, std::uint32_t choice) const { return prob_[node][choice]; }

  PolicyState root_state() const override { return 1; }
  PolicyState child_state(PolicyState state, std::uint32_t action) const override { return 2 * state + action; }
  void step_probabilities(PolicyState state, std::span<double> out) const override;
  bool uniform_below(PolicyState state) const override;
  void sample_into(Rng& rng, ActionSequence& out) const override;
  std::unique_ptr<SequencePolicy> clone() const override;
  void dump(std::ostream& os) const override;

 protected:
  void apply_reward(const ActionSequence& a, const EpochOutcome& outcome) override;

 private:
  void refresh(std::uint64_t node);
  void check_node(std::uint64_t node) const;

  double beta_;
  double initial_h_;
  std::vector<std::array<double, 2>> h_;
  std::vector<std::array<double, 2>> prob_;
  std::vector<bool> touched_;
};

}  // namespace qrl
