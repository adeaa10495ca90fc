#include <algorithm>
#include <cfloat>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "qrl/agents/agents.hpp"
#include "qrl/errors.hpp"

namespace qrl::agents {

std::string describe(const ModeSwitchRule& rule) {
  std::ostringstream os;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, AlwaysQuantum>) {
          os << "always_quantum";
        } else if constexpr (std::is_same_v<T, QThreshold>) {
          os << "q_threshold(" << r.q_stop << ")";
        } else if constexpr (std::is_same_v<T, RewardFrequency>) {
          os << "reward_frequency(" << r.window << ", " << r.threshold << ")";
        } else {
          os << "reward_count(" << r.rewards << ")";
        }
      },
      rule);
  return os.str();
}

void validate(const ModeSwitchRule& rule) {
  if (const auto* q = std::get_if<QThreshold>(&rule)) {
    if (!(q->q_stop > 0.0 && q->q_stop <= 1.0)) throw ContractViolation("q_threshold must lie in (0, 1]");
  } else if (const auto* f = std::get_if<RewardFrequency>(&rule)) {
    if (f->window == 0) throw ContractViolation("reward_frequency window must be positive");
    if (!(f->threshold >= 0.0 && f->threshold <= 1.0)) {
      throw ContractViolation("reward_frequency threshold must lie in [0, 1]");
    }
  }
}

QMinEstimate parse_q_min_estimate(std::string_view name) {
  if (name == "policy") return QMinEstimate::policy;
  if (name == "observed") return QMinEstimate::observed;
  throw ContractViolation("unknown q_min estimate '" + std::string(name) + "'");
}

std::string_view q_min_estimate_name(QMinEstimate e) {
  return e == QMinEstimate::policy ? "policy" : "observed";
}

namespace {

enum class Mode { quantum, classical };

class Runner {
 public:
  Runner(SequencePolicy& policy, const DseEnvironment& env, const StopRule& stop, Rng& rng, bool keep_records,
         std::uint64_t enumeration_limit)
      : policy_(policy), env_(env), stop_(stop), rng_(rng), keep_(keep_records), limit_(enumeration_limit) {
    if (policy.space().arities().size() != env.space().arities().size() ||
        !std::equal(policy.space().arities().begin(), policy.space().arities().end(),
                    env.space().arities().begin())) {
      throw ContractViolation("policy and environment disagree on the epoch shape");
    }
    if (stop.epoch_budget == 0) throw ContractViolation("epoch budget must be positive");
    q_ = winning_probability(policy_, env_, limit_);
    trace_.q_initial = q_;
    played_.steps.resize(env.epoch_length());
  }

  AgentTrace run_classical() {
    while (!finished()) classical_epoch();
    return std::move(trace_);
  }

  AgentTrace run_hybrid(const amplify::SearchParams& params, const ModeSwitchRule& rule, const HybridOptions& opt) {
    params.validate();
    validate(rule);
    if (opt.firewall && std::holds_alternative<QThreshold>(rule)) {
      throw ContractViolation("q_threshold switching reads the instrumented winning probability; "
                              "not available with the agent-knowledge firewall");
    }
    rule_ = &rule;
    if (const auto* f = std::get_if<RewardFrequency>(&rule)) window_size_ = f->window;
    update_mode();
    while (!finished()) {
      if (mode_ == Mode::classical) {
        classical_epoch();
      } else if (!quantum_interval(params, opt)) {
        break;
      }
    }
    return std::move(trace_);
  }

 private:
  bool finished() {
    if (stop_.q_learned && q_ >= *stop_.q_learned) return true;
    if (stop_.rewards && trace_.history.size() >= *stop_.rewards) return true;
    if (trace_.total_epochs >= stop_.epoch_budget) {
      trace_.censored = stop_.has_target();
      return true;
    }
    return false;
  }

  void record(EpochKind kind, std::uint64_t count, double reward) {
    if (keep_) append_span(trace_, kind, count, reward, q_);
  }

  void observe_unamplified(bool rewarded) {
    ++unamplified_;
    if (window_size_ == 0) return;
    window_.push_back(rewarded);
    window_hits_ += rewarded ? 1 : 0;
    if (window_.size() > window_size_) {
      window_hits_ -= window_.front() ? 1 : 0;
      window_.pop_front();
    }
  }

  void classical_epoch() {
    policy_.sample_into(rng_, played_);
    const double r = env_.reward(played_);
    ++trace_.total_epochs;
    observe_unamplified(r > 0.0);
    if (r > 0.0) {
      rewarded(EpochKind::classical, env_.evaluate(played_));
    } else {
      record(EpochKind::classical, 1, 0.0);
      if (rule_) update_mode();
    }
  }

  // One search for a reward under the current policy. Returns false when the
  // epoch budget ran out mid-search.
  bool quantum_interval(const amplify::SearchParams& params, const HybridOptions& opt) {
    const double q_min = estimate_q_min(opt.q_min);
    auto backend = amplify::make_backend(opt.backend, policy_, env_, params.alpha_o, opt.statevector_limit);
    const std::uint64_t remaining = stop_.epoch_budget - trace_.total_epochs;
    auto observer = [&](const amplify::GroverOutcome& o) {
      const std::uint64_t amplified = o.epochs_consumed - 1;
      record(EpochKind::quantum, amplified, 0.0);
      trace_.quantum_epochs += amplified;
      if (o.iterations_k == 0) observe_unamplified(o.rewarded);
      if (!o.rewarded) {
        ++trace_.total_epochs;
        trace_.total_epochs += amplified;
        record(EpochKind::verification, 1, 0.0);
      } else {
        trace_.total_epochs += amplified;
      }
    };
    const amplify::SearchResult result = amplify::exponential_search(*backend, params, q_min, rng_, observer, remaining);
    trace_.attempts += result.attempts;
    if (!result.found) {
      if (result.truncated_epochs > 0) {
        record(EpochKind::quantum, result.truncated_epochs, 0.0);
        trace_.quantum_epochs += result.truncated_epochs;
        trace_.total_epochs += result.truncated_epochs;
      }
      if (stop_.has_target()) trace_.censored = true;
      if (result.budget_exhausted && trace_.total_epochs < stop_.epoch_budget) {
        // attempt budget ran out before the epoch budget
        trace_.censored = true;
      }
      return false;
    }
    ++trace_.total_epochs;
    played_ = result.found->measured;
    rewarded(EpochKind::verification, result.found->verification);
    return true;
  }

  double estimate_q_min(QMinEstimate how) const {
    double q_min = q_min_bound(policy_);
    if (how == QMinEstimate::observed && !seen_.empty()) {
      double seen_mass = 0.0;
      for (std::uint64_t idx : seen_) seen_mass += sequence_probability(policy_, policy_.space().sequence_at(idx));
      q_min = std::max(q_min, seen_mass);
    }
    return std::clamp(q_min, DBL_MIN, 1.0);
  }

  void rewarded(EpochKind kind, const EpochOutcome& outcome) {
    const std::uint64_t idx = env_.space().index_of(played_);
    update_on_reward(policy_, played_, outcome);
    const double q_before = q_;
    q_ = winning_probability(policy_, env_, limit_);
    trace_.history.append(idx, outcome.reward);
    seen_.insert(idx);
    trace_.rewards.push_back({trace_.total_epochs, unamplified_, q_before, q_});
    record(kind, 1, outcome.reward);
    if (rule_) update_mode();
  }

  void update_mode() {
    std::visit(
        [&](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, AlwaysQuantum>) {
            mode_ = Mode::quantum;
          } else if constexpr (std::is_same_v<T, QThreshold>) {
            mode_ = q_ >= r.q_stop ? Mode::classical : Mode::quantum;
          } else if constexpr (std::is_same_v<T, RewardFrequency>) {
            const bool full = window_.size() >= r.window;
            const double freq = full ? static_cast<double>(window_hits_) / static_cast<double>(r.window) : 0.0;
            mode_ = full && freq >= r.threshold ? Mode::classical : Mode::quantum;
          } else {
            mode_ = trace_.history.size() >= r.rewards ? Mode::classical : Mode::quantum;
          }
        },
        *rule_);
  }

  SequencePolicy& policy_;
  const DseEnvironment& env_;
  const StopRule& stop_;
  Rng& rng_;
  bool keep_;
  std::uint64_t limit_;
  AgentTrace trace_;
  ActionSequence played_;
  double q_ = 0.0;
  std::uint64_t unamplified_ = 0;
  const ModeSwitchRule* rule_ = nullptr;
  Mode mode_ = Mode::classical;
  std::uint64_t window_size_ = 0;
  std::deque<bool> window_;
  std::uint64_t window_hits_ = 0;
  std::set<std::uint64_t> seen_;
};

}  // namespace

AgentTrace run_classical(SequencePolicy& policy, const DseEnvironment& env, const StopRule& stop, Rng& rng,
                         bool keep_records, std::uint64_t enumeration_limit) {
  return Runner(policy, env, stop, rng, keep_records, enumeration_limit).run_classical();
}

AgentTrace run_hybrid(SequencePolicy& policy, const DseEnvironment& env, const amplify::SearchParams& params,
                      const ModeSwitchRule& rule, const StopRule& stop, Rng& rng, const HybridOptions& options) {
  return Runner(policy, env, stop, rng, options.keep_records, options.enumeration_limit)
      .run_hybrid(params, rule, options);
}

}  // namespace qrl::agents
