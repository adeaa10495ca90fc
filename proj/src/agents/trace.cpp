#include "qrl/agents/trace.hpp"

#include <string>

namespace qrl::agents {

std::string_view kind_name(EpochKind kind) {
  switch (kind) {
    case EpochKind::classical:
      return "classical";
    case EpochKind::quantum:
      return "quantum";
    case EpochKind::verification:
      return "verification";
  }
  return "?";
}

std::uint64_t AgentTrace::interval_length(std::size_t j) const {
  return rewards[j].epoch - (j == 0 ? 0 : rewards[j - 1].epoch);
}

void append_span(AgentTrace& trace, EpochKind kind, std::uint64_t count, double reward, double q_after) {
  if (count == 0) return;
  auto& recs = trace.records;
  if (!recs.empty() && reward == 0.0 && recs.back().reward == 0.0 && recs.back().kind == kind) {
    recs.back().count += count;
    recs.back().q_after = q_after;
    return;
  }
  const std::uint64_t first = recs.empty() ? 1 : recs.back().first_epoch + recs.back().count;
  recs.push_back({first, count, kind, reward, q_after});
}

std::string audit_trace(const AgentTrace& trace, std::uint32_t alpha_o) {
  std::uint64_t next = 1;
  std::uint64_t quantum = 0;
  std::uint64_t pending_quantum = 0;
  std::size_t reward_idx = 0;
  for (const auto& span : trace.records) {
    if (span.first_epoch != next) return "span at epoch " + std::to_string(span.first_epoch) + " is not contiguous";
    if (span.count == 0) return "empty span";
    if (span.reward > 0.0) {
      if (span.count != 1) return "rewarded span longer than one epoch";
      if (reward_idx >= trace.rewards.size()) return "rewarded epoch without reward event";
      if (trace.rewards[reward_idx].epoch != span.first_epoch) return "reward event epoch mismatch";
      if (trace.history[reward_idx].reward != span.reward) return "history reward mismatch";
      ++reward_idx;
    }
    switch (span.kind) {
      case EpochKind::quantum:
        quantum += span.count;
        pending_quantum += span.count;
        break;
      case EpochKind::verification:
        if (pending_quantum % alpha_o != 0) return "quantum run not a multiple of alpha_o";
        pending_quantum = 0;
        break;
      case EpochKind::classical:
        if (pending_quantum != 0 && next + span.count - 1 != trace.total_epochs) {
          return "classical epoch directly after unverified quantum epochs";
        }
        break;
    }
    next += span.count;
  }
  if (!trace.records.empty()) {
    if (next - 1 != trace.total_epochs) return "spans cover " + std::to_string(next - 1) + " epochs, trace reports " +
                                               std::to_string(trace.total_epochs);
    if (quantum != trace.quantum_epochs) return "quantum epoch count mismatch";
    if (reward_idx != trace.rewards.size()) return "reward events without rewarded epochs";
  }
  if (trace.rewards.size() != trace.history.size()) return "history and reward events differ in length";
  return {};
}

}  // namespace qrl::agents
