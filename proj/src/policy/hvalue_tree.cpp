#include "qrl/policy/hvalue_tree.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "qrl/errors.hpp"

namespace qrl {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string node_prefix(std::uint64_t node) {
  std::string bits;
  while (node > 1) {
    bits.push_back(node & 1 ? '1' : '0');
    node >>= 1;
  }
  return bits.empty() ? "-" : std::string(bits.rbegin(), bits.rend());
}

}  // namespace

HValueTreePolicy::HValueTreePolicy(std::size_t layers, double beta, double initial_h)
    : SequencePolicy(SequenceSpace::binary(layers)), beta_(beta), initial_h_(initial_h) {
  if (layers == 0 || layers > kMaxLayers) throw ContractViolation("h-value tree supports 1..20 layers");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ContractViolation("beta must be positive and finite");
  if (!std::isfinite(initial_h)) throw ContractViolation("initial h must be finite");
  const std::size_t nodes = std::size_t{1} << layers;
  h_.assign(nodes, {initial_h, initial_h});
  prob_.assign(nodes, {0.5, 0.5});
  touched_.assign(nodes, false);
}

void HValueTreePolicy::check_node(std::uint64_t node) const {
  if (node == 0 || node >= h_.size()) throw ContractViolation("node id outside the decision tree");
}

std::pair<double, double> HValueTreePolicy::h(std::uint64_t node) const {
  check_node(node);
  return {h_[node][0], h_[node][1]};
}

void HValueTreePolicy::set_h(std::uint64_t node, std::pair<double, double> values) {
  check_node(node);
  if (!std::isfinite(values.first) || !std::isfinite(values.second)) throw ContractViolation("h-values must be finite");
  h_[node] = {values.first, values.second};
  refresh(node);
  for (std::uint64_t n = node; n >= 1; n >>= 1) touched_[n] = true;
}

void HValueTreePolicy::refresh(std::uint64_t node) {
  const double p0 = decision_probability({h_[node][0], h_[node][1]}, 0, beta_);
  prob_[node] = {p0, 1.0 - p0};
}

void HValueTreePolicy::step_probabilities(PolicyState state, std::span<double> out) const {
  out[0] = prob_[state][0];
  out[1] = prob_[state][1];
}

bool HValueTreePolicy::uniform_below(PolicyState state) const {
  return state >= touched_.size() || !touched_[state];
}

void HValueTreePolicy::sample_into(Rng& rng, ActionSequence& out) const {
  const std::size_t l = layers();
  out.steps.resize(l);
  std::uint64_t node = 1;
  for (std::size_t y = 0; y < l; ++y) {
    const std::uint32_t bit = uniform01(rng) < prob_[node][0] ? 0u : 1u;
    out.steps[y] = bit;
    node = 2 * node + bit;
  }
}

std::unique_ptr<SequencePolicy> HValueTreePolicy::clone() const {
  return std::make_unique<HValueTreePolicy>(*this);
}

void HValueTreePolicy::apply_reward(const ActionSequence& a, const EpochOutcome& outcome) {
  std::uint64_t node = 1;
  for (std::uint32_t bit : a.steps) {
    h_[node][bit] += outcome.reward;
    touched_[node] = true;
    refresh(node);
    node = 2 * node + bit;
  }
}

void HValueTreePolicy::dump(std::ostream& os) const {
  os << "# hvalue-tree layers=" << layers() << " beta=" << format_double(beta_)
     << " initial_h=" << format_double(initial_h_) << '\n';
  for (std::uint64_t node = 1; node < h_.size(); ++node) {
    if (!touched_[node]) continue;
    os << node_prefix(node) << ' ' << format_double(h_[node][0]) << ' ' << format_double(h_[node][1]) << '\n';
  }
}

}  // namespace qrl
