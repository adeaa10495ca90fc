#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qrl/policy/history.hpp"

namespace qrl::agents {

enum class EpochKind : std::uint8_t { classical, quantum, verification };

std::string_view kind_name(EpochKind kind);

// A run of consecutive epochs of one kind with identical reward, stored
// run-length encoded. Rewarded epochs always form spans of length 1.
struct EpochSpan {
  std::uint64_t first_epoch = 1;  // 1-based
  std::uint64_t count = 0;
  EpochKind kind = EpochKind::classical;
  double reward = 0.0;
  double q_after = 0.0;  // instrumented winning probability after the span
};

// Bookkeeping for one rewarded epoch, parallel to the rewarded history.
struct RewardEvent {
  std::uint64_t epoch = 0;              // 1-based index among all epochs
  std::uint64_t unamplified_epoch = 0;  // index counting only non-quantum epochs
  double q_before = 0.0;                // Q_j of the interval this reward ends
  double q_after = 0.0;                 // Q after the policy update
};

struct AgentTrace {
  std::vector<EpochSpan> records;  // empty when recording is disabled
  RewardedHistory history;
  std::vector<RewardEvent> rewards;
  double q_initial = 0.0;
  std::uint64_t total_epochs = 0;
  std::uint64_t quantum_epochs = 0;
  std::uint64_t attempts = 0;  // amplification attempts (hybrid only)
  bool censored = false;

  double q_final() const { return rewards.empty() ? q_initial : rewards.back().q_after; }
  // Number of epochs in interval j (between reward j-1 and reward j).
  std::uint64_t interval_length(std::size_t j) const;
  std::uint64_t unamplified_epochs() const { return total_epochs - quantum_epochs; }
};

// Appends an epoch run to `trace.records`, merging with the previous span
// when kind and reward match and the reward is zero.
void append_span(AgentTrace& trace, EpochKind kind, std::uint64_t count, double reward, double q_after);

// Checks the trace's internal accounting: spans are contiguous from epoch 1
// and cover total_epochs, quantum spans sum to quantum_epochs, rewarded
// spans line up with history and reward events, and every verification
// epoch is preceded by a whole number of alpha_o-epoch iterations. Returns
// an empty string when consistent, otherwise a description of the first
// violation.
std::string audit_trace(const AgentTrace& trace, std::uint32_t alpha_o);

// When learning ends: the instrumented winning probability reaches the
// threshold, a number of rewards is collected, or the epoch budget runs out.
struct StopRule {
  std::optional<double> q_learned;
  std::optional<std::uint64_t> rewards;
  std::uint64_t epoch_budget = 1'000'000;

  bool has_target() const { return q_learned.has_value() || rewards.has_value(); }
};

}  // namespace qrl::agents
