#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qrl/policy/policy.hpp"

namespace qrl {

// Weight update applied to one visited (percept, action) pair of a rewarded
// epoch.
struct MapUpdateRule {
  std::string name;
  std::function<void(std::vector<double>& weights, std::uint32_t action, double reward)> apply;
};

// Looks up a shipped update rule by name ("additive"); throws
// ContractViolation for unknown names.
MapUpdateRule map_update_rule(std::string_view name);

// Planning policy built from a map of the environment.
//
// Known transitions (percept, action) -> percept let the agent chain per-step
// distributions along an epoch. Unknown percepts, and percepts without
// weights, use the uniform distribution over the step's actions. Known
// percepts with weights use softmax(2 beta w), which coincides with the
// h-value tree's decision probability on binary steps.
class MapPolicy final : public SequencePolicy {
 public:
  static constexpr PolicyState kUnknown = ~PolicyState{0};

  MapPolicy(SequenceSpace space, std::uint64_t initial_percept, double beta,
            MapUpdateRule rule = map_update_rule("additive"));

  double beta() const { return beta_; }
  const std::string& rule_name() const { return rule_.name; }
  std::size_t known_transition_count() const { return transitions_.size(); }

  PolicyState root_state() const override { return initial_percept_; }
  PolicyState child_state(PolicyState state, std::uint32_t action) const override;
  void step_probabilities(PolicyState state, std::span<double> out) const override;
  bool uniform_below(PolicyState state) const override;
  std::unique_ptr<SequencePolicy> clone() const override;
  void dump(std::ostream& os) const override;

 protected:
  void apply_reward(const ActionSequence& a, const EpochOutcome& outcome) override;

 private:
  struct Edge {
    std::uint64_t percept;
    std::uint32_t action;
    friend bool operator==(const Edge&, const Edge&) = default;
  };
  struct EdgeHash {
    std::size_t operator()(const Edge& e) const;
  };

  std::uint64_t initial_percept_;
  double beta_;
  MapUpdateRule rule_;
  std::unordered_map<Edge, std::uint64_t, EdgeHash> transitions_;
  std::unordered_map<std::uint64_t, std::vector<double>> weights_;
  std::unordered_map<std::uint64_t, std::size_t> outgoing_;
};

}  // namespace qrl
