#include "qrl/stats/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrl/errors.hpp"
#include "qrl/stats/kahan.hpp"

namespace qrl::stats {

CurveAccounting parse_curve_accounting(std::string_view name) {
  if (name == "all_epochs") return CurveAccounting::all_epochs;
  if (name == "unamplified_only") return CurveAccounting::unamplified_only;
  throw ContractViolation("unknown curve accounting '" + std::string(name) + "'");
}

std::string_view curve_accounting_name(CurveAccounting a) {
  return a == CurveAccounting::all_epochs ? "all_epochs" : "unamplified_only";
}

namespace {

// Calls fn(epoch, reward) for every rewarded epoch and returns the number of
// epochs on the chosen axis.
template <class Fn>
std::uint64_t walk(const agents::AgentTrace& trace, CurveAccounting accounting, Fn&& fn) {
  if (trace.total_epochs > 0 && trace.records.empty()) {
    throw ContractViolation("trace was run without epoch records");
  }
  std::uint64_t t = 0;
  for (const auto& span : trace.records) {
    if (accounting == CurveAccounting::unamplified_only && span.kind == agents::EpochKind::quantum) continue;
    if (span.reward != 0.0) {
      for (std::uint64_t i = 1; i <= span.count; ++i) fn(t + i, span.reward);
    }
    t += span.count;
  }
  return t;
}

}  // namespace

CurveAccumulator::CurveAccumulator(std::uint64_t horizon, CurveAccounting accounting)
    : horizon_(horizon),
      accounting_(accounting),
      sum_(horizon, 0.0),
      sum_sq_(horizon, 0.0),
      alive_delta_(horizon + 1, 0) {
  if (horizon == 0) throw ContractViolation("curve horizon must be positive");
}

void CurveAccumulator::add(const agents::AgentTrace& trace) {
  const std::uint64_t len = walk(trace, accounting_, [&](std::uint64_t e, double r) {
    if (e > horizon_) return;
    sum_[e - 1] += r;
    sum_sq_[e - 1] += r * r;
  });
  const std::uint64_t played = std::min(len, horizon_);
  if (played > 0) {
    alive_delta_[0] += 1;
    alive_delta_[played] -= 1;
  }
  ++agents_;
}

void CurveAccumulator::merge(const CurveAccumulator& other) {
  if (other.horizon_ != horizon_ || other.accounting_ != accounting_) {
    throw ContractViolation("cannot merge curves with different shapes");
  }
  for (std::uint64_t i = 0; i < horizon_; ++i) {
    sum_[i] += other.sum_[i];
    sum_sq_[i] += other.sum_sq_[i];
  }
  for (std::uint64_t i = 0; i <= horizon_; ++i) alive_delta_[i] += other.alive_delta_[i];
  agents_ += other.agents_;
}

std::vector<CurvePoint> CurveAccumulator::curve() const {
  std::vector<CurvePoint> out;
  out.reserve(horizon_);
  std::int64_t alive = 0;
  for (std::uint64_t i = 0; i < horizon_; ++i) {
    alive += alive_delta_[i];
    CurvePoint p;
    p.epoch = i + 1;
    p.n_alive = static_cast<std::uint64_t>(alive);
    if (alive > 0) {
      const double n = static_cast<double>(alive);
      p.mean_reward = sum_[i] / n;
      if (alive > 1) {
        const double var = std::max(0.0, (sum_sq_[i] - n * p.mean_reward * p.mean_reward) / (n - 1.0));
        p.stderr = std::sqrt(var / n);
      }
    }
    out.push_back(p);
  }
  return out;
}

std::vector<CurvePoint> average_reward_curve(std::span<const agents::AgentTrace> traces, std::uint64_t horizon,
                                             CurveAccounting accounting) {
  CurveAccumulator acc(horizon, accounting);
  for (const auto& t : traces) acc.add(t);
  return acc.curve();
}

double trace_window_mean(const agents::AgentTrace& trace, std::uint64_t first, std::uint64_t last,
                         CurveAccounting accounting) {
  KahanSum s;
  const std::uint64_t len = walk(trace, accounting, [&](std::uint64_t e, double r) {
    if (e >= first && e <= last) s += r;
  });
  const std::uint64_t hi = std::min(last, len);
  if (hi < first) return 0.0;
  return s.value() / static_cast<double>(hi - first + 1);
}

double curve_window_mean(std::span<const CurvePoint> curve, std::uint64_t first, std::uint64_t last) {
  KahanSum s;
  std::uint64_t n = 0;
  for (const auto& p : curve) {
    if (p.epoch < first || p.epoch > last) continue;
    s += p.mean_reward;
    ++n;
  }
  return n > 0 ? s.value() / static_cast<double>(n) : 0.0;
}

}  // namespace qrl::stats
