#include "qrl/policy/map_policy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

#include "qrl/errors.hpp"
#include "qrl/rng.hpp"

namespace qrl {

MapUpdateRule map_update_rule(std::string_view name) {
  if (name == "additive") {
    return {"additive", [](std::vector<double>& w, std::uint32_t action, double reward) { w[action] += reward; }};
  }
  throw ContractViolation("unknown map update rule '" + std::string(name) + "'");
}

std::size_t MapPolicy::EdgeHash::operator()(const Edge& e) const {
  return static_cast<std::size_t>(splitmix64(e.percept * 0x100000001B3ULL + e.action));
}

MapPolicy::MapPolicy(SequenceSpace space, std::uint64_t initial_percept, double beta, MapUpdateRule rule)
    : SequencePolicy(std::move(space)), initial_percept_(initial_percept), beta_(beta), rule_(std::move(rule)) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ContractViolation("beta must be positive and finite");
  if (initial_percept == kUnknown) throw ContractViolation("initial percept id is reserved");
  if (!rule_.apply) throw ContractViolation("map update rule has no body");
}

PolicyState MapPolicy::child_state(PolicyState state, std::uint32_t action) const {
  if (state == kUnknown) return kUnknown;
  const auto it = transitions_.find(Edge{state, action});
  return it == transitions_.end() ? kUnknown : it->second;
}

void MapPolicy::step_probabilities(PolicyState state, std::span<double> out) const {
  const auto it = state == kUnknown ? weights_.end() : weights_.find(state);
  if (it == weights_.end()) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
    return;
  }
  const auto& w = it->second;
  const auto weight = [&](std::size_t a) { return a < w.size() ? w[a] : 0.0; };
  double top = weight(0);
  for (std::size_t a = 1; a < out.size(); ++a) top = std::max(top, weight(a));
  double norm = 0.0;
  for (std::size_t a = 0; a < out.size(); ++a) {
    out[a] = std::exp(2.0 * beta_ * (weight(a) - top));
    norm += out[a];
  }
  for (double& p : out) p /= norm;
}

bool MapPolicy::uniform_below(PolicyState state) const {
  if (state == kUnknown) return true;
  return !weights_.contains(state) && !outgoing_.contains(state);
}

std::unique_ptr<SequencePolicy> MapPolicy::clone() const { return std::make_unique<MapPolicy>(*this); }

void MapPolicy::apply_reward(const ActionSequence& a, const EpochOutcome& outcome) {
  std::uint64_t percept = initial_percept_;
  for (std::size_t step = 0; step < a.size(); ++step) {
    const std::uint64_t next = outcome.percepts[step];
    if (next == kUnknown) throw ContractViolation("percept id is reserved");
    if (transitions_.emplace(Edge{percept, a[step]}, next).second) ++outgoing_[percept];
    auto& w = weights_[percept];
    if (w.size() < space().arity(step)) w.resize(space().arity(step), 0.0);
    rule_.apply(w, a[step], outcome.reward);
    percept = next;
  }
}

void MapPolicy::dump(std::ostream& os) const {
  const auto fmt = [](double v) {
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
  };
  os << "# map-policy beta=" << fmt(beta_) << " rule=" << rule_.name << " initial=" << initial_percept_ << '\n';
  std::map<std::pair<std::uint64_t, std::uint32_t>, std::uint64_t> edges;
  for (const auto& [e, to] : transitions_) edges.emplace(std::pair{e.percept, e.action}, to);
  for (const auto& [e, to] : edges) os << "T " << e.first << ' ' << e.second << ' ' << to << '\n';
  std::map<std::uint64_t, std::vector<double>> weights(weights_.begin(), weights_.end());
  for (const auto& [p, w] : weights) {
    os << "W " << p;
    for (double v : w) os << ' ' << fmt(v);
    os << '\n';
  }
}

}  // namespace qrl
