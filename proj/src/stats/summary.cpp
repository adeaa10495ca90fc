#include "qrl/stats/summary.hpp"

#include <cmath>

#include "qrl/stats/kahan.hpp"

namespace qrl::stats {

LearningTime learning_time(const agents::AgentTrace& trace, double q_l) {
  if (trace.q_initial >= q_l) return {0, 0, false};
  for (std::size_t j = 0; j < trace.rewards.size(); ++j) {
    if (trace.rewards[j].q_after >= q_l) return {trace.rewards[j].epoch, j + 1, false};
  }
  return {trace.total_epochs, trace.rewards.size(), true};
}

double LearningTimeSummary::stderr_T() const {
  return n > 0 ? std_T / std::sqrt(static_cast<double>(n)) : 0.0;
}

double LearningTimeSummary::stderr_J() const {
  return n > 0 ? std_J / std::sqrt(static_cast<double>(n)) : 0.0;
}

double MeanStd::stderr_mean() const {
  return n > 0 ? std / std::sqrt(static_cast<double>(n)) : 0.0;
}

MeanStd mean_std(std::span<const double> xs) {
  MeanStd out;
  out.n = xs.size();
  if (xs.empty()) return out;
  KahanSum s;
  for (double x : xs) s += x;
  out.mean = s.value() / static_cast<double>(out.n);
  if (out.n > 1) {
    KahanSum ss;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss.value() / static_cast<double>(out.n - 1));
  }
  return out;
}

LearningTimeSummary summarize(std::span<const LearningTime> times, double q_l) {
  LearningTimeSummary s;
  s.q_l = q_l;
  KahanSum sum_t, sum_j, sum_all;
  for (const auto& t : times) {
    sum_all += static_cast<double>(t.T);
    if (t.censored) {
      ++s.censored_count;
      continue;
    }
    ++s.n;
    sum_t += static_cast<double>(t.T);
    sum_j += static_cast<double>(t.J);
  }
  if (!times.empty()) s.mean_T_with_censored = sum_all.value() / static_cast<double>(times.size());
  if (s.n == 0) return s;
  const double n = static_cast<double>(s.n);
  s.mean_T = sum_t.value() / n;
  s.mean_J = sum_j.value() / n;
  if (s.n > 1) {
    KahanSum vt, vj, c;
    for (const auto& t : times) {
      if (t.censored) continue;
      const double dt = static_cast<double>(t.T) - s.mean_T;
      const double dj = static_cast<double>(t.J) - s.mean_J;
      vt += dt * dt;
      vj += dj * dj;
      c += dt * dj;
    }
    s.std_T = std::sqrt(vt.value() / (n - 1.0));
    s.std_J = std::sqrt(vj.value() / (n - 1.0));
    s.cov_TJ = c.value() / (n - 1.0);
  }
  return s;
}

LearningTimeSummary summarize_learning(std::span<const agents::AgentTrace> traces, double q_l) {
  std::vector<LearningTime> times;
  times.reserve(traces.size());
  for (const auto& t : traces) times.push_back(learning_time(t, q_l));
  LearningTimeSummary s = summarize(times, q_l);
  std::vector<KahanSum> sums;
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (times[i].censored) continue;
    for (std::size_t j = 0; j < times[i].J; ++j) {
      if (sums.size() <= j) {
        sums.resize(j + 1);
        counts.resize(j + 1, 0);
      }
      sums[j] += static_cast<double>(traces[i].interval_length(j));
      ++counts[j];
    }
  }
  for (std::size_t j = 0; j < sums.size(); ++j) s.interval_means.push_back(sums[j].value() / counts[j]);
  return s;
}

Decomposition interval_decomposition(std::span<const agents::AgentTrace> traces, double q_l) {
  std::vector<double> t_values, predicted, residuals;
  for (const auto& trace : traces) {
    const LearningTime lt = learning_time(trace, q_l);
    if (lt.censored) continue;
    KahanSum p;
    for (std::size_t j = 0; j < lt.J; ++j) p += 1.0 / trace.rewards[j].q_before;
    t_values.push_back(static_cast<double>(lt.T));
    predicted.push_back(p.value());
    residuals.push_back(static_cast<double>(lt.T) - p.value());
  }
  Decomposition d;
  d.n = residuals.size();
  d.mean_T = mean_std(t_values).mean;
  d.mean_predicted = mean_std(predicted).mean;
  const MeanStd r = mean_std(residuals);
  d.mean_residual = r.mean;
  d.stderr_residual = r.stderr_mean();
  return d;
}

}  // namespace qrl::stats
