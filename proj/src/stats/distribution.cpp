#include "qrl/stats/distribution.hpp"

#include <cmath>

#include "qrl/errors.hpp"
#include "qrl/stats/kahan.hpp"

namespace qrl::stats {

double HistoryDistribution::total() const {
  KahanSum s;
  for (const auto& [key, p] : probabilities) s += p;
  return s.value();
}

double HistoryDistribution::probability(const HistoryKey& key) const {
  const auto it = probabilities.find(key);
  return it == probabilities.end() ? 0.0 : it->second;
}

namespace {

void expand(const SequencePolicy& policy, const DseEnvironment& env, const std::vector<std::uint64_t>& rewarded,
            std::size_t J, HistoryKey& prefix, double p, HistoryDistribution& out) {
  if (prefix.size() == J) {
    out.probabilities[prefix] += p;
    return;
  }
  const double q = winning_probability(policy, env);
  for (std::uint64_t idx : rewarded) {
    const ActionSequence a = env.space().sequence_at(idx);
    const double pi = sequence_probability(policy, a);
    if (pi == 0.0) continue;
    auto next = policy.clone();
    update_on_reward(*next, a, env.evaluate(a));
    prefix.push_back(idx);
    expand(*next, env, rewarded, J, prefix, p * (pi / q), out);
    prefix.pop_back();
  }
}

}  // namespace

HistoryDistribution exact_history_distribution(const SequencePolicy& initial_policy, const DseEnvironment& env,
                                               std::size_t J, std::uint64_t limit) {
  const std::vector<std::uint64_t> rewarded = rewarded_indices(env);
  if (rewarded.empty()) throw ContractViolation("environment has no rewarded sequence");
  double branches = 1.0;
  for (std::size_t j = 0; j < J; ++j) branches *= static_cast<double>(rewarded.size());
  if (branches > static_cast<double>(limit)) {
    throw LimitExceeded("rewarded history enumeration needs " + std::to_string(branches) + " branches, limit is " +
                        std::to_string(limit));
  }
  HistoryDistribution out;
  out.J = J;
  HistoryKey prefix;
  expand(initial_policy, env, rewarded, J, prefix, 1.0, out);
  return out;
}

HistoryDistribution EmpiricalHistories::frequencies() const {
  HistoryDistribution d;
  d.J = J;
  for (const auto& [key, c] : counts) d.probabilities[key] = static_cast<double>(c) / static_cast<double>(n);
  return d;
}

EmpiricalHistories empirical_history_distribution(std::span<const agents::AgentTrace> traces, std::size_t J) {
  if (traces.empty()) throw ContractViolation("no traces");
  EmpiricalHistories out;
  out.J = J;
  HistoryKey key(J);
  for (const auto& t : traces) {
    if (t.history.size() < J) throw ContractViolation("trace has fewer than J rewards");
    for (std::size_t j = 0; j < J; ++j) key[j] = t.history[j].sequence;
    ++out.counts[key];
    ++out.n;
  }
  return out;
}

double tv_distance(const HistoryDistribution& p, const HistoryDistribution& q) {
  KahanSum s;
  for (const auto& [key, pv] : p.probabilities) s += std::abs(pv - q.probability(key));
  for (const auto& [key, qv] : q.probabilities) {
    if (!p.probabilities.contains(key)) s += qv;
  }
  return 0.5 * s.value();
}

double multinomial_tv_bound(const HistoryDistribution& p, std::uint64_t n, double sigmas) {
  KahanSum s;
  for (const auto& [key, pv] : p.probabilities) s += std::sqrt(pv * (1.0 - pv) / static_cast<double>(n));
  return 0.5 * sigmas * s.value();
}

double two_sample_tv_bound(const HistoryDistribution& p, std::uint64_t n1, std::uint64_t n2, double sigmas) {
  const double scale = 1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2);
  KahanSum s;
  for (const auto& [key, pv] : p.probabilities) s += std::sqrt(pv * (1.0 - pv) * scale);
  return 0.5 * sigmas * s.value();
}

}  // namespace qrl::stats
