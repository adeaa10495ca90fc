#include "qrl/env/environment.hpp"

#include <string>

#include "qrl/errors.hpp"

namespace qrl {

namespace {

void require_enumerable(const DseEnvironment& env, std::uint64_t limit) {
  if (env.space().size() > limit) {
    throw NotEnumerable("sequence space of " + std::to_string(env.space().size()) +
                        " sequences exceeds enumeration limit " + std::to_string(limit));
  }
}

void collect(const DseEnvironment& env, ActionSequence& prefix, std::size_t depth,
             std::vector<std::uint64_t>& out) {
  const auto& space = env.space();
  const std::span<const std::uint32_t> head(prefix.steps.data(), depth);
  if (!env.may_reward(head)) return;
  if (depth == space.epoch_length()) {
    if (env.reward(prefix) > 0.0) out.push_back(space.index_of(prefix));
    return;
  }
  for (std::uint32_t a = 0; a < space.arity(depth); ++a) {
    prefix.steps[depth] = a;
    collect(env, prefix, depth + 1, out);
  }
}

}  // namespace

std::uint64_t count_rewarded(const DseEnvironment& env, std::uint64_t limit) {
  require_enumerable(env, limit);
  const auto& space = env.space();
  ActionSequence a;
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    space.sequence_at(i, a);
    if (env.evaluate(a).reward > 0.0) ++count;
  }
  return count;
}

std::vector<std::uint64_t> rewarded_indices(const DseEnvironment& env, std::uint64_t limit) {
  if (!env.prunes_prefixes()) require_enumerable(env, limit);
  ActionSequence prefix(std::vector<std::uint32_t>(env.epoch_length(), 0));
  std::vector<std::uint64_t> out;
  collect(env, prefix, 0, out);
  return out;
}

}  // namespace qrl
