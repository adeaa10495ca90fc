#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrl/agents/trace.hpp"

namespace qrl::stats {

// Learning time of one agent: the epoch of the first reward after which the
// instrumented winning probability is at least Q_l, and the number of
// rewards J collected up to then. T = 0 and J = 0 when the initial policy is
// already learned. Censored agents report their total epoch count and all
// rewards seen.
struct LearningTime {
  std::uint64_t T = 0;
  std::uint64_t J = 0;
  bool censored = false;
};

LearningTime learning_time(const agents::AgentTrace& trace, double q_l);

struct LearningTimeSummary {
  double q_l = 0.0;
  std::uint64_t n = 0;  // uncensored agents, the basis of every mean below
  std::uint64_t censored_count = 0;
  double mean_T = 0.0;
  double std_T = 0.0;
  double mean_J = 0.0;
  double std_J = 0.0;
  double cov_TJ = 0.0;
  // Mean over all agents with censored ones at their censoring time.
  double mean_T_with_censored = 0.0;
  // Mean length of interval j over uncensored agents with J > j.
  std::vector<double> interval_means;

  double stderr_T() const;
  double stderr_J() const;
};

LearningTimeSummary summarize(std::span<const LearningTime> times, double q_l);
LearningTimeSummary summarize_learning(std::span<const agents::AgentTrace> traces, double q_l);

// Per-agent residual T - sum_{j<J} 1/Q_j for uncensored classical agents.
// Its mean is zero when interval lengths follow the geometric law.
struct Decomposition {
  double mean_T = 0.0;
  double mean_predicted = 0.0;
  double mean_residual = 0.0;
  double stderr_residual = 0.0;
  std::uint64_t n = 0;
};

Decomposition interval_decomposition(std::span<const agents::AgentTrace> traces, double q_l);

// Sample mean and unbiased standard deviation.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  std::uint64_t n = 0;
  double stderr_mean() const;
};

MeanStd mean_std(std::span<const double> xs);

}  // namespace qrl::stats
