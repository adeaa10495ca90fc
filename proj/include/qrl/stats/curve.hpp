#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qrl/agents/trace.hpp"

namespace qrl::stats {

// Which epochs make up the time axis of a reward curve.
enum class CurveAccounting {
  all_epochs,       // every environment epoch, amplification epochs with reward 0
  unamplified_only, // only classical and verification epochs
};

CurveAccounting parse_curve_accounting(std::string_view name);
std::string_view curve_accounting_name(CurveAccounting a);

struct CurvePoint {
  std::uint64_t epoch = 0;
  double mean_reward = 0.0;
  double stderr = 0.0;
  std::uint64_t n_alive = 0;
};

// Per-epoch reward sums over an ensemble. An agent contributes to epochs 1
// through its last epoch (capped at the horizon). Accumulators for disjoint
// agent sets merge exactly when their sums are integers, and in a fixed order
// otherwise.
class CurveAccumulator {
 public:
  CurveAccumulator(std::uint64_t horizon, CurveAccounting accounting = CurveAccounting::all_epochs);

  void add(const agents::AgentTrace& trace);
  void merge(const CurveAccumulator& other);

  std::uint64_t horizon() const { return horizon_; }
  std::uint64_t agents() const { return agents_; }
  std::vector<CurvePoint> curve() const;

 private:
  std::uint64_t horizon_;
  CurveAccounting accounting_;
  std::uint64_t agents_ = 0;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::vector<std::int64_t> alive_delta_;  // difference array, size horizon + 1
};

std::vector<CurvePoint> average_reward_curve(std::span<const agents::AgentTrace> traces, std::uint64_t horizon,
                                             CurveAccounting accounting = CurveAccounting::all_epochs);

// Mean reward of one trace over epochs [first, last] (1-based, inclusive) on
// the given time axis. Epochs past the end of the trace are not counted;
// returns 0 when none of the window was played.
double trace_window_mean(const agents::AgentTrace& trace, std::uint64_t first, std::uint64_t last,
                         CurveAccounting accounting = CurveAccounting::all_epochs);

// Mean of curve means over [first, last], 1-based inclusive.
double curve_window_mean(std::span<const CurvePoint> curve, std::uint64_t first, std::uint64_t last);

}  // namespace qrl::stats
