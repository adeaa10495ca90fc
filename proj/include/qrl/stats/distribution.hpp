#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qrl/agents/trace.hpp"
#include "qrl/env/environment.hpp"
#include "qrl/policy/policy.hpp"

namespace qrl::stats {

// A rewarded history truncated at J entries, keyed by the sequence indices
// (rewards are a function of the sequence in a deterministic environment).
using HistoryKey = std::vector<std::uint64_t>;

inline constexpr std::uint64_t kDefaultHistoryLimit = 1'000'000;

struct HistoryDistribution {
  std::size_t J = 0;
  std::map<HistoryKey, double> probabilities;

  double total() const;
  double probability(const HistoryKey& key) const;
};

// p(h) = prod_j Pi_j(a_j) / Q_j over all rewarded histories of length J, where
// Pi_j is the policy after the first j entries and Q_j its winning
// probability. Throws LimitExceeded when |rewarded|^J exceeds `limit`.
HistoryDistribution exact_history_distribution(const SequencePolicy& initial_policy, const DseEnvironment& env,
                                               std::size_t J, std::uint64_t limit = kDefaultHistoryLimit);

struct EmpiricalHistories {
  std::size_t J = 0;
  std::uint64_t n = 0;
  std::map<HistoryKey, std::uint64_t> counts;

  HistoryDistribution frequencies() const;
};

// Frequency table of the first J rewarded sequences over `traces`. Throws
// ContractViolation if any trace has fewer than J rewards or `traces` is
// empty.
EmpiricalHistories empirical_history_distribution(std::span<const agents::AgentTrace> traces, std::size_t J);

// Total variation distance over the union of supports.
double tv_distance(const HistoryDistribution& p, const HistoryDistribution& q);

// sigmas/2 * sum_i sqrt(p_i (1 - p_i) / n): the TV scale of multinomial noise
// for n draws from p.
double multinomial_tv_bound(const HistoryDistribution& p, std::uint64_t n, double sigmas);
// The same for the difference of two independent samples of sizes n1 and n2.
double two_sample_tv_bound(const HistoryDistribution& p, std::uint64_t n1, std::uint64_t n2, double sigmas);

}  // namespace qrl::stats
