#include "qrl/amplify/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrl/errors.hpp"
#include "qrl/stats/kahan.hpp"

namespace qrl::amplify {

double AmplitudeState::squared_norm() const {
  stats::KahanSum sum;
  for (double a : amplitudes) sum += a * a;
  return sum.value();
}

double AmplitudeState::rewarded_mass() const {
  stats::KahanSum sum;
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (rewarded[i]) sum += amplitudes[i] * amplitudes[i];
  }
  return sum.value();
}

AmplitudeState statevector_prepare(const SequencePolicy& policy, const DseEnvironment& env, std::uint64_t limit) {
  if (!(policy.space() == env.space())) throw ContractViolation("policy and environment shapes differ");
  const std::uint64_t n = env.space().size();
  if (n > limit) {
    throw LimitExceeded("statevector dimension " + std::to_string(n) + " exceeds limit " + std::to_string(limit));
  }
  AmplitudeState state;
  state.space = env.space();
  const auto probs = enumerate_probabilities(policy, limit);
  state.amplitudes.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) state.amplitudes[i] = std::sqrt(probs[i]);
  state.reference = state.amplitudes;
  state.rewarded.assign(n, 0);
  for (std::uint64_t idx : rewarded_indices(env, limit)) state.rewarded[idx] = 1;
  return state;
}

void grover_iterate(AmplitudeState& state, std::span<const std::uint8_t> rewarded_mask) {
  auto& v = state.amplitudes;
  const auto& psi = state.reference;
  if (rewarded_mask.size() != v.size()) throw ContractViolation("rewarded mask size differs from state dimension");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (rewarded_mask[i]) v[i] = -v[i];
  }
  stats::KahanSum overlap;
  for (std::size_t i = 0; i < v.size(); ++i) overlap += psi[i] * v[i];
  const double c = 2.0 * overlap.value();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * psi[i];
  ++state.iterations;
}

MeasurementTable::MeasurementTable(const AmplitudeState& state) : cumulative_(state.amplitudes.size()) {
  stats::KahanSum sum;
  for (std::size_t i = 0; i < cumulative_.size(); ++i) {
    sum += state.probability(i);
    cumulative_[i] = sum.value();
  }
}

std::uint64_t MeasurementTable::draw(Rng& rng) const {
  const double u = uniform01(rng) * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = static_cast<std::uint64_t>(it - cumulative_.begin());
  return std::min<std::uint64_t>(idx, cumulative_.size() - 1);
}

std::uint64_t statevector_measure(const AmplitudeState& state, Rng& rng) {
  return MeasurementTable(state).draw(rng);
}

}  // namespace qrl::amplify
