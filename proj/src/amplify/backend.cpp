#include "qrl/amplify/backend.hpp"

#include <string>

#include "qrl/amplify/grover.hpp"
#include "qrl/errors.hpp"

namespace qrl::amplify {

Backend parse_backend(std::string_view name) {
  if (name == "analytic") return Backend::analytic;
  if (name == "statevector") return Backend::statevector;
  throw ContractViolation("unknown backend '" + std::string(name) + "'");
}

std::string_view backend_name(Backend b) { return b == Backend::analytic ? "analytic" : "statevector"; }

AmplificationBackend::AmplificationBackend(const DseEnvironment& env, std::uint32_t alpha_o)
    : env_(env), alpha_o_(alpha_o) {
  if (alpha_o < 1) throw ContractViolation("alpha_o must be at least 1");
}

GroverOutcome AmplificationBackend::finish(std::uint64_t k, ActionSequence measured) const {
  GroverOutcome out;
  out.sequence = env_.space().index_of(measured);
  out.verification = env_.evaluate(measured);
  out.measured = std::move(measured);
  out.iterations_k = k;
  out.epochs_consumed = epochs_for(k, alpha_o_);
  out.rewarded = out.verification.reward > 0.0;
  return out;
}

AnalyticBackend::AnalyticBackend(const SequencePolicy& policy, const DseEnvironment& env, std::uint32_t alpha_o,
                                 std::uint64_t limit)
    : AmplificationBackend(env, alpha_o), mass_(policy, env, limit) {}

GroverOutcome AnalyticBackend::run(std::uint64_t k, Rng& rng) {
  const double q = mass_.total();
  const double g = grover_success_prob(std::min(q, 1.0), k);
  ActionSequence a;
  const bool hit = q > 0.0 && (q >= 1.0 || uniform01(rng) < g);
  if (hit) {
    mass_.sample_rewarded(rng, a);
  } else {
    mass_.sample_unrewarded(rng, a);
  }
  return finish(k, std::move(a));
}

StatevectorBackend::StatevectorBackend(const SequencePolicy& policy, const DseEnvironment& env,
                                       std::uint32_t alpha_o, std::uint64_t limit)
    : AmplificationBackend(env, alpha_o) {
  states_.push_back(statevector_prepare(policy, env, limit));
  tables_.emplace_back();
  q_ = states_.front().rewarded_mass();
}

const AmplitudeState& StatevectorBackend::state_after(std::uint64_t k) {
  while (states_.size() <= k) {
    AmplitudeState next = states_.back();
    grover_iterate(next);
    states_.push_back(std::move(next));
    tables_.emplace_back();
  }
  return states_[k];
}

GroverOutcome StatevectorBackend::run(std::uint64_t k, Rng& rng) {
  const auto& state = state_after(k);
  auto& table = tables_[k];
  if (!table) table.emplace(state);
  return finish(k, state.space.sequence_at(table->draw(rng)));
}

std::unique_ptr<AmplificationBackend> make_backend(Backend kind, const SequencePolicy& policy,
                                                   const DseEnvironment& env, std::uint32_t alpha_o,
                                                   std::uint64_t statevector_limit) {
  if (kind == Backend::analytic) return std::make_unique<AnalyticBackend>(policy, env, alpha_o);
  return std::make_unique<StatevectorBackend>(policy, env, alpha_o, statevector_limit);
}

GroverOutcome analytic_grover_sample(const SequencePolicy& policy, const DseEnvironment& env, std::uint64_t k,
                                     Rng& rng, std::uint32_t alpha_o) {
  AnalyticBackend backend(policy, env, alpha_o);
  return backend.run(k, rng);
}

}  // namespace qrl::amplify
