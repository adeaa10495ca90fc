#include "qrl/verify/oracles.hpp"

#include <stdexcept>

#include "qrl/errors.hpp"
#include "qrl/stats/kahan.hpp"

namespace qrl::verify {

namespace {

void advance(const SequencePolicy& policy, const DseEnvironment& env, std::size_t J, stats::HistoryKey& key,
             double mass, double residual, std::uint64_t max_epochs, stats::HistoryDistribution& out) {
  if (key.size() == J) {
    out.probabilities[key] += mass;
    return;
  }
  const std::vector<double> probs = enumerate_probabilities(policy);
  const std::uint64_t size = env.space().size();
  // Per-epoch transition: stay with the unrewarded mass, move to a child
  // history for each rewarded sequence. Child masses accumulate as a
  // geometric series evaluated term by term.
  stats::KahanSum stay_sum;
  std::vector<std::pair<std::uint64_t, double>> rewarded;
  for (std::uint64_t i = 0; i < size; ++i) {
    if (env.reward(env.space().sequence_at(i)) > 0.0) {
      rewarded.emplace_back(i, probs[i]);
    } else {
      stay_sum += probs[i];
    }
  }
  const double stay = stay_sum.value();
  std::vector<stats::KahanSum> reached(rewarded.size());
  double waiting = mass;
  std::uint64_t epochs = 0;
  while (waiting > residual) {
    if (++epochs > max_epochs) throw LimitExceeded("epoch-level oracle did not converge");
    for (std::size_t r = 0; r < rewarded.size(); ++r) reached[r] += waiting * rewarded[r].second;
    waiting *= stay;
  }
  for (std::size_t r = 0; r < rewarded.size(); ++r) {
    const double m = reached[r].value();
    if (m == 0.0) continue;
    const ActionSequence a = env.space().sequence_at(rewarded[r].first);
    auto next = policy.clone();
    update_on_reward(*next, a, env.evaluate(a));
    key.push_back(rewarded[r].first);
    advance(*next, env, J, key, m, residual, max_epochs, out);
    key.pop_back();
  }
}

}  // namespace

stats::HistoryDistribution epoch_level_history_distribution(const SequencePolicy& initial_policy,
                                                            const DseEnvironment& env, std::size_t J, double residual,
                                                            std::uint64_t max_epochs) {
  stats::HistoryDistribution out;
  out.J = J;
  stats::HistoryKey key;
  advance(initial_policy, env, J, key, 1.0, residual, max_epochs, out);
  return out;
}

double expected_reward(const SequencePolicy& policy, const DseEnvironment& env) {
  const std::vector<double> probs = enumerate_probabilities(policy);
  stats::KahanSum s;
  for (std::uint64_t i = 0; i < probs.size(); ++i) s += probs[i] * env.reward(env.space().sequence_at(i));
  return s.value();
}

}  // namespace qrl::verify
