#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "qrl/amplify/statevector.hpp"
#include "qrl/policy/rewarded_mass.hpp"

namespace qrl::amplify {

inline std::uint64_t epochs_for(std::uint64_t iterations, std::uint32_t alpha_o) {
  return static_cast<std::uint64_t>(alpha_o) * iterations + 1;
}

// Result of k amplification iterations, a measurement, and the classical
// verification epoch played with the measured sequence.
struct GroverOutcome {
  ActionSequence measured;
  std::uint64_t sequence = 0;
  std::uint64_t iterations_k = 0;
  std::uint64_t epochs_consumed = 1;  // alpha_o * k + 1
  bool rewarded = false;
  EpochOutcome verification;

  double reward() const { return verification.reward; }
};

enum class Backend { analytic, statevector };

Backend parse_backend(std::string_view name);
std::string_view backend_name(Backend b);

// Amplified sampling for one fixed policy snapshot.
class AmplificationBackend {
 public:
  virtual ~AmplificationBackend() = default;

  // Winning probability of the snapshot.
  virtual double q() const = 0;
  virtual GroverOutcome run(std::uint64_t k, Rng& rng) = 0;

 protected:
  AmplificationBackend(const DseEnvironment& env, std::uint32_t alpha_o);
  GroverOutcome finish(std::uint64_t k, ActionSequence measured) const;

  const DseEnvironment& env_;
  std::uint32_t alpha_o_;
};

// Samples from the closed-form amplified distribution: rewarded with
// probability G(Q, k), and within either the rewarded or the unrewarded set
// proportionally to the policy.
class AnalyticBackend final : public AmplificationBackend {
 public:
  AnalyticBackend(const SequencePolicy& policy, const DseEnvironment& env, std::uint32_t alpha_o,
                  std::uint64_t limit = kDefaultEnumerationLimit);

  double q() const override { return mass_.total(); }
  GroverOutcome run(std::uint64_t k, Rng& rng) override;

 private:
  RewardedMassTree mass_;
};

// Exact statevector evolution; amplified states are cached per k.
class StatevectorBackend final : public AmplificationBackend {
 public:
  StatevectorBackend(const SequencePolicy& policy, const DseEnvironment& env, std::uint32_t alpha_o,
                     std::uint64_t limit = kDefaultStatevectorLimit);

  double q() const override { return q_; }
  GroverOutcome run(std::uint64_t k, Rng& rng) override;
  const AmplitudeState& state_after(std::uint64_t k);

 private:
  std::vector<AmplitudeState> states_;
  std::vector<std::optional<MeasurementTable>> tables_;
  double q_;
};

std::unique_ptr<AmplificationBackend> make_backend(Backend kind, const SequencePolicy& policy,
                                                   const DseEnvironment& env, std::uint32_t alpha_o,
                                                   std::uint64_t statevector_limit = kDefaultStatevectorLimit);

// One analytic amplified draw for (policy, env) with k iterations.
GroverOutcome analytic_grover_sample(const SequencePolicy& policy, const DseEnvironment& env, std::uint64_t k,
                                     Rng& rng, std::uint32_t alpha_o = 2);

}  // namespace qrl::amplify
