#include "qrl/policy/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrl/errors.hpp"
#include "qrl/stats/kahan.hpp"

namespace qrl {

double decision_probability(std::pair<double, double> h, int chosen, double beta) {
  if (!std::isfinite(h.first) || !std::isfinite(h.second)) throw ContractViolation("h-values must be finite");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ContractViolation("beta must be positive and finite");
  if (chosen != 0 && chosen != 1) throw ContractViolation("binary decision expects chosen in {0, 1}");
  // 0.5 + 0.5 tanh(x) == 1 / (1 + exp(-2x)); evaluating the smaller of the
  // pair through the logistic form keeps it positive for large |x|.
  const double x = beta * (h.first - h.second);
  const double small = 1.0 / (1.0 + std::exp(2.0 * std::abs(x)));
  const double p0 = x >= 0.0 ? 1.0 - small : small;
  return chosen == 0 ? p0 : 1.0 - p0;
}

void SequencePolicy::sample_into(Rng& rng, ActionSequence& out) const {
  const auto& sp = space();
  out.steps.resize(sp.epoch_length());
  std::vector<double> probs(sp.max_arity());
  PolicyState state = root_state();
  for (std::size_t step = 0; step < sp.epoch_length(); ++step) {
    const std::span<double> dist(probs.data(), sp.arity(step));
    step_probabilities(state, dist);
    const double u = uniform01(rng);
    double acc = 0.0;
    std::uint32_t choice = sp.arity(step) - 1;
    for (std::uint32_t a = 0; a + 1 < sp.arity(step); ++a) {
      acc += dist[a];
      if (u < acc) {
        choice = a;
        break;
      }
    }
    out.steps[step] = choice;
    state = child_state(state, choice);
  }
}

double sequence_probability(const SequencePolicy& policy, const ActionSequence& a) {
  const auto& sp = policy.space();
  sp.validate(a);
  std::vector<double> probs(sp.max_arity());
  PolicyState state = policy.root_state();
  double p = 1.0;
  for (std::size_t step = 0; step < a.size(); ++step) {
    const std::span<double> dist(probs.data(), sp.arity(step));
    policy.step_probabilities(state, dist);
    p *= dist[a[step]];
    state = policy.child_state(state, a[step]);
  }
  return p;
}

ActionSequence sample_sequence(const SequencePolicy& policy, Rng& rng) {
  ActionSequence out;
  policy.sample_into(rng, out);
  return out;
}

namespace {

struct Walker {
  const SequencePolicy& policy;
  const SequenceSpace& space;
  std::vector<double> scratch;  // one arity-sized slot per depth

  explicit Walker(const SequencePolicy& p) : policy(p), space(p.space()), scratch(p.space().epoch_length() * p.space().max_arity()) {}

  std::span<double> dist(PolicyState state, std::size_t depth) {
    std::span<double> out(scratch.data() + depth * space.max_arity(), space.arity(depth));
    policy.step_probabilities(state, out);
    return out;
  }
};

void enumerate(Walker& w, PolicyState state, std::size_t depth, std::uint64_t index, double mass,
               std::vector<double>& out) {
  if (depth == w.space.epoch_length()) {
    out[index] = mass;
    return;
  }
  const auto dist = w.dist(state, depth);
  for (std::uint32_t a = 0; a < dist.size(); ++a) {
    enumerate(w, w.policy.child_state(state, a), depth + 1, index * dist.size() + a, mass * dist[a], out);
  }
}

// Conditional rewarded mass below a prefix: sum over rewarded completions of
// the product of the remaining step probabilities.
double rewarded_mass(Walker& w, const DseEnvironment& env, ActionSequence& prefix, PolicyState state,
                     std::size_t depth) {
  if (!env.may_reward(std::span(prefix.steps.data(), depth))) return 0.0;
  if (depth == w.space.epoch_length()) return env.reward(prefix) > 0.0 ? 1.0 : 0.0;
  const auto dist = w.dist(state, depth);
  stats::KahanSum sum;
  for (std::uint32_t a = 0; a < dist.size(); ++a) {
    if (dist[a] == 0.0) continue;
    prefix.steps[depth] = a;
    // dist may be overwritten by deeper levels only at deeper offsets.
    sum += dist[a] * rewarded_mass(w, env, prefix, w.policy.child_state(state, a), depth + 1);
  }
  return sum.value();
}

double min_mass(Walker& w, PolicyState state, std::size_t depth) {
  if (depth == w.space.epoch_length()) return 1.0;
  if (w.policy.uniform_below(state)) {
    double p = 1.0;
    for (std::size_t d = depth; d < w.space.epoch_length(); ++d) p /= w.space.arity(d);
    return p;
  }
  const auto dist = w.dist(state, depth);
  double best = 2.0;
  for (std::uint32_t a = 0; a < dist.size(); ++a) {
    best = std::min(best, dist[a] * min_mass(w, w.policy.child_state(state, a), depth + 1));
  }
  return best;
}

}  // namespace

std::vector<double> enumerate_probabilities(const SequencePolicy& policy, std::uint64_t limit) {
  if (policy.space().size() > limit) {
    throw NotEnumerable("sequence space of " + std::to_string(policy.space().size()) + " exceeds limit");
  }
  Walker w(policy);
  std::vector<double> out(policy.space().size());
  enumerate(w, policy.root_state(), 0, 0, 1.0, out);
  return out;
}

double winning_probability(const SequencePolicy& policy, const DseEnvironment& env, std::uint64_t limit) {
  if (!(policy.space() == env.space())) throw ContractViolation("policy and environment shapes differ");
  if (!env.prunes_prefixes() && env.space().size() > limit) {
    throw NotEnumerable("winning probability needs enumeration of " + std::to_string(env.space().size()) +
                        " sequences, above limit " + std::to_string(limit));
  }
  Walker w(policy);
  ActionSequence prefix(std::vector<std::uint32_t>(env.epoch_length(), 0));
  return rewarded_mass(w, env, prefix, policy.root_state(), 0);
}

double q_min_bound(const SequencePolicy& policy) {
  Walker w(policy);
  return min_mass(w, policy.root_state(), 0);
}

void update_on_reward(SequencePolicy& policy, const ActionSequence& a, const EpochOutcome& outcome) {
  if (!(outcome.reward > 0.0)) throw ContractViolation("policy updates require a strictly positive reward");
  policy.space().validate(a);
  if (outcome.percepts.size() != a.size()) throw ContractViolation("outcome percepts do not match sequence length");
  policy.apply_reward(a, outcome);
}

}  // namespace qrl
