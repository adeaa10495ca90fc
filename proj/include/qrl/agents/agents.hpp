#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "qrl/agents/trace.hpp"
#include "qrl/amplify/search.hpp"
#include "qrl/env/environment.hpp"
#include "qrl/policy/policy.hpp"

namespace qrl::agents {

struct AlwaysQuantum {};
// Quantum while the instrumented winning probability is below q_stop.
struct QThreshold {
  double q_stop = 0.0;
};
// Quantum while the observed reward frequency over the last `window`
// unamplified epochs is below `threshold`. Until the window fills the agent
// stays quantum.
struct RewardFrequency {
  std::uint64_t window = 50;
  double threshold = 0.0;
};
// Quantum until `rewards` rewards have been found.
struct RewardCount {
  std::uint64_t rewards = 1;
};

using ModeSwitchRule = std::variant<AlwaysQuantum, QThreshold, RewardFrequency, RewardCount>;

std::string describe(const ModeSwitchRule& rule);
// Throws ContractViolation on out-of-range parameters.
void validate(const ModeSwitchRule& rule);

// How the agent estimates Q_min before each search.
enum class QMinEstimate {
  policy,    // min over sequences of the policy probability
  observed,  // the larger of that and the policy mass on sequences already seen rewarded
};

QMinEstimate parse_q_min_estimate(std::string_view name);
std::string_view q_min_estimate_name(QMinEstimate e);

struct HybridOptions {
  amplify::Backend backend = amplify::Backend::analytic;
  // Forbids agent decisions that read the instrumented winning probability.
  bool firewall = false;
  QMinEstimate q_min = QMinEstimate::policy;
  std::uint64_t statevector_limit = amplify::kDefaultStatevectorLimit;
  std::uint64_t enumeration_limit = kDefaultEnumerationLimit;
  bool keep_records = true;
};

// Classical agent: sample a sequence from the policy each epoch, update on
// reward. The policy is updated in place.
AgentTrace run_classical(SequencePolicy& policy, const DseEnvironment& env, const StopRule& stop, Rng& rng,
                         bool keep_records = true, std::uint64_t enumeration_limit = kDefaultEnumerationLimit);

// Hybrid agent: exponential amplified search while in quantum mode, classical
// sampling otherwise; the switch rule is re-evaluated after every reward and
// after every unamplified epoch.
AgentTrace run_hybrid(SequencePolicy& policy, const DseEnvironment& env, const amplify::SearchParams& params,
                      const ModeSwitchRule& rule, const StopRule& stop, Rng& rng, const HybridOptions& options = {});

}  // namespace qrl::agents
