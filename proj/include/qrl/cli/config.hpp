#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qrl/agents/agents.hpp"
#include "qrl/amplify/search.hpp"
#include "qrl/env/environment.hpp"
#include "qrl/policy/policy.hpp"
#include "qrl/stats/curve.hpp"

namespace qrl::cli {

enum class EnvType { binary_tree, reward_table };
enum class PolicyType { hvalue_tree, map };
enum class AgentMode { classical, hybrid, nisq };
enum class SwitchType { always_quantum, q_threshold, reward_frequency, reward_count };

struct EnvSpec {
  EnvType type = EnvType::binary_tree;
  std::uint32_t layers = 12;
  std::uint32_t reward_exponent = 5;
  std::uint64_t path_seed = 1;
  std::string path;   // explicit correct path as a bit string; overrides path_seed
  std::string table;  // reward table file for reward_table

  friend bool operator==(const EnvSpec&, const EnvSpec&) = default;
};

struct AgentSpec {
  PolicyType policy = PolicyType::hvalue_tree;
  std::vector<double> beta{0.1};  // more than one value sweeps
  std::string update_rule = "additive";

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct RunSpec {
  std::vector<AgentMode> modes{AgentMode::hybrid};  // more than one value sweeps
  std::uint64_t agents = 1000;
  std::uint64_t seed = 1;
  amplify::Backend backend = amplify::Backend::analytic;
  agents::QMinEstimate q_min = agents::QMinEstimate::policy;
  bool firewall = false;
  std::uint64_t statevector_limit = amplify::kDefaultStatevectorLimit;
  std::uint64_t enumeration_limit = kDefaultEnumerationLimit;

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct SearchSpec {
  std::uint32_t alpha_o = 2;
  double lambda = 6.0 / 5.0;
  std::optional<std::uint64_t> k_max;  // required for nisq, ignored otherwise
  std::optional<std::uint64_t> attempt_budget;

  friend bool operator==(const SearchSpec&, const SearchSpec&) = default;
};

struct SwitchSpec {
  SwitchType rule = SwitchType::q_threshold;
  std::optional<double> q_stop;  // unset: q_max_threshold(alpha_o, 1)
  std::uint64_t window = 50;
  std::optional<double> frequency;  // unset: q_max_threshold(alpha_o, 1)
  std::uint64_t rewards = 1;

  friend bool operator==(const SwitchSpec&, const SwitchSpec&) = default;
};

struct StopSpec {
  std::optional<double> q_learned;
  std::optional<std::uint64_t> rewards;
  std::uint64_t epoch_budget = 2000;  // also the curve horizon

  friend bool operator==(const StopSpec&, const StopSpec&) = default;
};

struct OutputSpec {
  std::string dir = "out";
  stats::CurveAccounting accounting = stats::CurveAccounting::all_epochs;
  // Threshold for T and J in agents.csv; unset: the stop rule's q_learned.
  std::optional<double> learning_threshold;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunConfig {
  EnvSpec env;
  AgentSpec agent;
  RunSpec run;
  SearchSpec search;
  SwitchSpec switching;
  StopSpec stop;
  OutputSpec output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// One point of a sweep: a single beta and mode.
struct Variant {
  double beta = 0.1;
  AgentMode mode = AgentMode::hybrid;
  std::string label;  // subdirectory name when the sweep has more than one point
};

std::vector<Variant> variants(const RunConfig& cfg);

// Throws ContractViolation naming the offending key.
void validate(const RunConfig& cfg);

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);
// INI text that parse_config reads back to an equal RunConfig.
std::string to_ini(const RunConfig& cfg);

std::string_view mode_name(AgentMode m);

// Built from a validated config.
std::unique_ptr<DseEnvironment> make_environment(const EnvSpec& spec);
std::unique_ptr<SequencePolicy> make_policy(const AgentSpec& spec, double beta, const DseEnvironment& env);
amplify::SearchParams search_params(const RunConfig& cfg, AgentMode mode);
agents::ModeSwitchRule switch_rule(const RunConfig& cfg);
agents::StopRule stop_rule(const RunConfig& cfg);
agents::HybridOptions hybrid_options(const RunConfig& cfg);
std::optional<double> reporting_threshold(const RunConfig& cfg);

}  // namespace qrl::cli
