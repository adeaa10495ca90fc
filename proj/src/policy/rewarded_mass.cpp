#include "qrl/policy/rewarded_mass.hpp"

#include <string>

#include "qrl/errors.hpp"
#include "qrl/stats/kahan.hpp"

namespace qrl {

RewardedMassTree::RewardedMassTree(const SequencePolicy& policy, const DseEnvironment& env, std::uint64_t limit)
    : policy_(policy.clone()) {
  if (!(policy.space() == env.space())) throw ContractViolation("policy and environment shapes differ");
  if (!env.prunes_prefixes() && env.space().size() > limit) {
    throw NotEnumerable("rewarded mass needs enumeration of " + std::to_string(env.space().size()) + " sequences");
  }
  const auto& sp = policy_->space();
  scratch_.assign(sp.epoch_length() * sp.max_arity(), 0.0);
  ActionSequence prefix(std::vector<std::uint32_t>(sp.epoch_length(), 0));
  total_ = build(env, prefix, policy_->root_state(), 0);
}

double RewardedMassTree::build(const DseEnvironment& env, ActionSequence& prefix, PolicyState state,
                               std::size_t depth) {
  const auto& sp = policy_->space();
  const std::span<const std::uint32_t> head(prefix.steps.data(), depth);
  if (!env.may_reward(head)) return 0.0;
  double m = 0.0;
  if (depth == sp.epoch_length()) {
    m = env.reward(prefix) > 0.0 ? 1.0 : 0.0;
  } else {
    const std::span<double> dist(scratch_.data() + depth * sp.max_arity(), sp.arity(depth));
    policy_->step_probabilities(state, dist);
    stats::KahanSum sum;
    for (std::uint32_t a = 0; a < dist.size(); ++a) {
      if (dist[a] == 0.0) continue;
      prefix.steps[depth] = a;
      sum += dist[a] * build(env, prefix, policy_->child_state(state, a), depth + 1);
    }
    m = sum.value();
  }
  if (m > 0.0) mass_.emplace(sp.prefix_id(head), m);
  return m;
}

double RewardedMassTree::mass(std::span<const std::uint32_t> prefix) const {
  const auto it = mass_.find(policy_->space().prefix_id(prefix));
  return it == mass_.end() ? 0.0 : it->second;
}

void RewardedMassTree::sample_rewarded(Rng& rng, ActionSequence& out) const {
  if (!(total_ > 0.0)) throw ContractViolation("no rewarded mass to sample from");
  sample(rng, out, true);
}

void RewardedMassTree::sample_unrewarded(Rng& rng, ActionSequence& out) const {
  if (!(total_ < 1.0)) throw ContractViolation("no unrewarded mass to sample from");
  sample(rng, out, false);
}

void RewardedMassTree::sample(Rng& rng, ActionSequence& out, bool rewarded) const {
  const auto& sp = policy_->space();
  out.steps.assign(sp.epoch_length(), 0);
  std::vector<double> dist(sp.max_arity());
  std::vector<double> weight(sp.max_arity());
  PolicyState state = policy_->root_state();
  bool free = false;  // below a prefix with no rewarded mass: plain policy draw
  for (std::size_t depth = 0; depth < sp.epoch_length(); ++depth) {
    const std::uint32_t arity = sp.arity(depth);
    policy_->step_probabilities(state, std::span(dist.data(), arity));
    double norm = 0.0;
    for (std::uint32_t a = 0; a < arity; ++a) {
      double w = dist[a];
      if (!free) {
        out.steps[depth] = a;
        const double child = mass(std::span(out.steps.data(), depth + 1));
        w *= rewarded ? child : 1.0 - child;
      }
      weight[a] = w;
      norm += w;
    }
    const double u = uniform01(rng) * norm;
    double acc = 0.0;
    std::uint32_t choice = arity;
    for (std::uint32_t a = 0; a < arity; ++a) {
      if (weight[a] <= 0.0) continue;
      choice = a;
      acc += weight[a];
      if (u < acc) break;
    }
    out.steps[depth] = choice;
    if (!free && mass(std::span(out.steps.data(), depth + 1)) == 0.0) free = true;
    state = policy_->child_state(state, choice);
  }
}

}  // namespace qrl
