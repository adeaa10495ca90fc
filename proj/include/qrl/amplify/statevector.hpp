#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrl/policy/policy.hpp"

namespace qrl::amplify {

inline constexpr std::uint64_t kDefaultStatevectorLimit = std::uint64_t{1} << 20;

// Real amplitudes over the sequence space (every state reachable from
// sqrt(policy) under sign flips and reflections stays real), together with
// the reference state |psi> the reflection is taken about and the rewarded
// mask of the environment.
struct AmplitudeState {
  SequenceSpace space;
  std::vector<double> amplitudes;
  std::vector<double> reference;
  std::vector<std::uint8_t> rewarded;
  std::uint64_t iterations = 0;

  double squared_norm() const;
  // Total probability on rewarded basis states.
  double rewarded_mass() const;
  double probability(std::uint64_t index) const { return amplitudes[index] * amplitudes[index]; }
};

// |psi> = sum_a sqrt(Pi(a)) |a>. Throws LimitExceeded above `limit` basis states.
AmplitudeState statevector_prepare(const SequencePolicy& policy, const DseEnvironment& env,
                                   std::uint64_t limit = kDefaultStatevectorLimit);

// One iteration R O: sign flip on basis states marked in `rewarded_mask`,
// then R = 1 - 2|psi><psi| about the stored reference state.
void grover_iterate(AmplitudeState& state, std::span<const std::uint8_t> rewarded_mask);
inline void grover_iterate(AmplitudeState& state) { grover_iterate(state, state.rewarded); }

// Index of a basis state drawn with probability |amplitude|^2.
std::uint64_t statevector_measure(const AmplitudeState& state, Rng& rng);

// Cumulative measurement distribution, for repeated draws from one state.
class MeasurementTable {
 public:
  explicit MeasurementTable(const AmplitudeState& state);
  std::uint64_t draw(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

}  // namespace qrl::amplify
