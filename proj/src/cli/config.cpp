#include "qrl/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qrl/amplify/grover.hpp"
#include "qrl/env/binary_tree.hpp"
#include "qrl/env/reward_table.hpp"
#include "qrl/errors.hpp"
#include "qrl/policy/hvalue_tree.hpp"
#include "qrl/policy/map_policy.hpp"
#include "qrl/stats/bounds.hpp"

namespace qrl::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string::npos ? s.size() : comma;
    std::string item = trim(std::string_view(s).substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw ContractViolation("config " + key + " = '" + value + "': " + why);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(key, v, "expected a number");
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(key, v, "expected a non-negative integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, v, "expected true or false");
}

EnvType parse_env_type(const std::string& v) {
  if (v == "binary_tree") return EnvType::binary_tree;
  if (v == "reward_table") return EnvType::reward_table;
  bad("env.type", v, "expected binary_tree or reward_table");
}

PolicyType parse_policy_type(const std::string& v) {
  if (v == "hvalue_tree") return PolicyType::hvalue_tree;
  if (v == "map") return PolicyType::map;
  bad("agent.policy", v, "expected hvalue_tree or map");
}

AgentMode parse_mode(const std::string& v) {
  if (v == "classical") return AgentMode::classical;
  if (v == "hybrid") return AgentMode::hybrid;
  if (v == "nisq") return AgentMode::nisq;
  bad("run.mode", v, "expected classical, hybrid or nisq");
}

SwitchType parse_switch(const std::string& v) {
  if (v == "always_quantum") return SwitchType::always_quantum;
  if (v == "q_threshold") return SwitchType::q_threshold;
  if (v == "reward_frequency") return SwitchType::reward_frequency;
  if (v == "reward_count") return SwitchType::reward_count;
  bad("switch.rule", v, "expected always_quantum, q_threshold, reward_frequency or reward_count");
}

std::string_view switch_name(SwitchType s) {
  switch (s) {
    case SwitchType::always_quantum:
      return "always_quantum";
    case SwitchType::q_threshold:
      return "q_threshold";
    case SwitchType::reward_frequency:
      return "reward_frequency";
    case SwitchType::reward_count:
      return "reward_count";
  }
  return "?";
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  // Calls fn(value) when section.key is present and non-empty.
  template <class Fn>
  void get(const std::string& section, const std::string& key, Fn&& fn) {
    const std::string full = section + "." + key;
    known_.push_back(full);
    const auto node = tree_.get_child_optional(pt::ptree::path_type(full, '.'));
    if (!node) return;
    const std::string v = trim(node->data());
    if (!v.empty()) fn(full, v);
  }

  void reject_unknown() const {
    for (const auto& [section, body] : tree_) {
      if (body.empty() && !body.data().empty()) throw ContractViolation("config key '" + section + "' outside a section");
      for (const auto& [key, value] : body) {
        const std::string full = section + "." + key;
        if (std::find(known_.begin(), known_.end(), full) == known_.end()) {
          throw ContractViolation("unknown config key '" + full + "'");
        }
      }
    }
  }

 private:
  const pt::ptree& tree_;
  std::vector<std::string> known_;
};

}  // namespace

std::string_view mode_name(AgentMode m) {
  switch (m) {
    case AgentMode::classical:
      return "classical";
    case AgentMode::hybrid:
      return "hybrid";
    case AgentMode::nisq:
      return "nisq";
  }
  return "?";
}

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ContractViolation(std::string("config parse error: ") + e.what());
  }
  RunConfig c;
  Reader r(tree);
  r.get("env", "type", [&](auto&, auto& v) { c.env.type = parse_env_type(v); });
  r.get("env", "layers", [&](auto& k, auto& v) { c.env.layers = static_cast<std::uint32_t>(to_uint(k, v)); });
  r.get("env", "reward_exponent",
        [&](auto& k, auto& v) { c.env.reward_exponent = static_cast<std::uint32_t>(to_uint(k, v)); });
  r.get("env", "path_seed", [&](auto& k, auto& v) { c.env.path_seed = to_uint(k, v); });
  r.get("env", "path", [&](auto&, auto& v) { c.env.path = v; });
  r.get("env", "table", [&](auto&, auto& v) { c.env.table = v; });

  r.get("agent", "policy", [&](auto&, auto& v) { c.agent.policy = parse_policy_type(v); });
  r.get("agent", "beta", [&](auto& k, auto& v) {
    c.agent.beta.clear();
    for (const auto& item : split_list(v)) c.agent.beta.push_back(to_double(k, item));
  });
  r.get("agent", "update_rule", [&](auto&, auto& v) { c.agent.update_rule = v; });

  r.get("run", "mode", [&](auto&, auto& v) {
    c.run.modes.clear();
    for (const auto& item : split_list(v)) c.run.modes.push_back(parse_mode(item));
  });
  r.get("run", "agents", [&](auto& k, auto& v) { c.run.agents = to_uint(k, v); });
  r.get("run", "seed", [&](auto& k, auto& v) { c.run.seed = to_uint(k, v); });
  r.get("run", "backend", [&](auto&, auto& v) { c.run.backend = amplify::parse_backend(v); });
  r.get("run", "q_min", [&](auto&, auto& v) { c.run.q_min = agents::parse_q_min_estimate(v); });
  r.get("run", "firewall", [&](auto& k, auto& v) { c.run.firewall = to_bool(k, v); });
  r.get("run", "statevector_limit", [&](auto& k, auto& v) { c.run.statevector_limit = to_uint(k, v); });
  r.get("run", "enumeration_limit", [&](auto& k, auto& v) { c.run.enumeration_limit = to_uint(k, v); });

  r.get("search", "alpha_o", [&](auto& k, auto& v) { c.search.alpha_o = static_cast<std::uint32_t>(to_uint(k, v)); });
  r.get("search", "lambda", [&](auto& k, auto& v) { c.search.lambda = to_double(k, v); });
  r.get("search", "k_max", [&](auto& k, auto& v) { c.search.k_max = to_uint(k, v); });
  r.get("search", "attempt_budget", [&](auto& k, auto& v) { c.search.attempt_budget = to_uint(k, v); });

  r.get("switch", "rule", [&](auto&, auto& v) { c.switching.rule = parse_switch(v); });
  r.get("switch", "q_stop", [&](auto& k, auto& v) { c.switching.q_stop = to_double(k, v); });
  r.get("switch", "window", [&](auto& k, auto& v) { c.switching.window = to_uint(k, v); });
  r.get("switch", "frequency", [&](auto& k, auto& v) { c.switching.frequency = to_double(k, v); });
  r.get("switch", "rewards", [&](auto& k, auto& v) { c.switching.rewards = to_uint(k, v); });

  r.get("stop", "q_learned", [&](auto& k, auto& v) { c.stop.q_learned = to_double(k, v); });
  r.get("stop", "rewards", [&](auto& k, auto& v) { c.stop.rewards = to_uint(k, v); });
  r.get("stop", "epoch_budget", [&](auto& k, auto& v) { c.stop.epoch_budget = to_uint(k, v); });

  r.get("output", "dir", [&](auto&, auto& v) { c.output.dir = v; });
  r.get("output", "accounting", [&](auto&, auto& v) { c.output.accounting = stats::parse_curve_accounting(v); });
  r.get("output", "learning_threshold", [&](auto& k, auto& v) { c.output.learning_threshold = to_double(k, v); });
  r.reject_unknown();
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return parse_config(in);
}

std::string to_ini(const RunConfig& c) {
  using stats::format_double;
  auto opt_d = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
  auto opt_u = [](const std::optional<std::uint64_t>& x) { return x ? std::to_string(*x) : std::string(); };
  std::ostringstream os;
  os << "[env]\n"
     << "type = " << (c.env.type == EnvType::binary_tree ? "binary_tree" : "reward_table") << '\n'
     << "layers = " << c.env.layers << '\n'
     << "reward_exponent = " << c.env.reward_exponent << '\n'
     << "path_seed = " << c.env.path_seed << '\n'
     << "path = " << c.env.path << '\n'
     << "table = " << c.env.table << "\n\n";
  os << "[agent]\n"
     << "policy = " << (c.agent.policy == PolicyType::hvalue_tree ? "hvalue_tree" : "map") << '\n'
     << "beta = ";
  for (std::size_t i = 0; i < c.agent.beta.size(); ++i) os << (i ? "," : "") << format_double(c.agent.beta[i]);
  os << '\n' << "update_rule = " << c.agent.update_rule << "\n\n";
  os << "[run]\n"
     << "mode = ";
  for (std::size_t i = 0; i < c.run.modes.size(); ++i) os << (i ? "," : "") << mode_name(c.run.modes[i]);
  os << '\n'
     << "agents = " << c.run.agents << '\n'
     << "seed = " << c.run.seed << '\n'
     << "backend = " << amplify::backend_name(c.run.backend) << '\n'
     << "q_min = " << agents::q_min_estimate_name(c.run.q_min) << '\n'
     << "firewall = " << (c.run.firewall ? "true" : "false") << '\n'
     << "statevector_limit = " << c.run.statevector_limit << '\n'
     << "enumeration_limit = " << c.run.enumeration_limit << "\n\n";
  os << "[search]\n"
     << "alpha_o = " << c.search.alpha_o << '\n'
     << "lambda = " << format_double(c.search.lambda) << '\n'
     << "k_max = " << opt_u(c.search.k_max) << '\n'
     << "attempt_budget = " << opt_u(c.search.attempt_budget) << "\n\n";
  os << "[switch]\n"
     << "rule = " << switch_name(c.switching.rule) << '\n'
     << "q_stop = " << opt_d(c.switching.q_stop) << '\n'
     << "window = " << c.switching.window << '\n'
     << "frequency = " << opt_d(c.switching.frequency) << '\n'
     << "rewards = " << c.switching.rewards << "\n\n";
  os << "[stop]\n"
     << "q_learned = " << opt_d(c.stop.q_learned) << '\n'
     << "rewards = " << opt_u(c.stop.rewards) << '\n'
     << "epoch_budget = " << c.stop.epoch_budget << "\n\n";
  os << "[output]\n"
     << "dir = " << c.output.dir << '\n'
     << "accounting = " << stats::curve_accounting_name(c.output.accounting) << '\n'
     << "learning_threshold = " << opt_d(c.output.learning_threshold) << '\n';
  return os.str();
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ContractViolation("config " + key + ": " + why);
  };
  if (c.env.type == EnvType::binary_tree) {
    if (c.env.layers < 1 || c.env.layers > HValueTreePolicy::kMaxLayers) {
      fail("env.layers", "must lie in [1, " + std::to_string(HValueTreePolicy::kMaxLayers) + "]");
    }
    if (c.env.reward_exponent > c.env.layers) fail("env.reward_exponent", "must not exceed env.layers");
    if (!c.env.path.empty()) {
      if (c.env.path.size() != c.env.layers) fail("env.path", "length must equal env.layers");
      if (c.env.path.find_first_not_of("01") != std::string::npos) fail("env.path", "must be a bit string");
    }
  } else if (c.env.table.empty()) {
    fail("env.table", "required for reward_table");
  }
  if (c.agent.beta.empty()) fail("agent.beta", "at least one value required");
  for (double b : c.agent.beta) {
    if (!(b > 0.0) || !std::isfinite(b)) fail("agent.beta", "must be positive and finite");
  }
  if (c.agent.policy == PolicyType::hvalue_tree && c.env.type != EnvType::binary_tree) {
    fail("agent.policy", "hvalue_tree needs a binary_tree environment");
  }
  if (c.agent.policy == PolicyType::map) map_update_rule(c.agent.update_rule);
  if (c.run.modes.empty()) fail("run.mode", "at least one mode required");
  if (c.run.agents == 0) fail("run.agents", "must be positive");
  for (AgentMode m : c.run.modes) {
    if (m == AgentMode::nisq && !c.search.k_max) fail("search.k_max", "required for nisq mode");
  }
  amplify::SearchParams{c.search.lambda, c.search.alpha_o, c.search.k_max, c.search.attempt_budget}.validate();
  if (c.search.attempt_budget && *c.search.attempt_budget == 0) fail("search.attempt_budget", "must be positive");
  if (c.run.firewall && c.switching.rule == SwitchType::q_threshold && c.switching.q_stop) {
    fail("switch.rule", "q_threshold reads the instrumented winning probability; use reward_frequency with firewall");
  }
  agents::validate(switch_rule(c));
  if (c.stop.epoch_budget == 0) fail("stop.epoch_budget", "must be positive");
  if (c.stop.q_learned && !(*c.stop.q_learned > 0.0 && *c.stop.q_learned <= 1.0)) {
    fail("stop.q_learned", "must lie in (0, 1]");
  }
  if (c.stop.rewards && *c.stop.rewards == 0) fail("stop.rewards", "must be positive");
  if (c.output.learning_threshold &&
      !(*c.output.learning_threshold > 0.0 && *c.output.learning_threshold <= 1.0)) {
    fail("output.learning_threshold", "must lie in (0, 1]");
  }
  if (c.output.dir.empty()) fail("output.dir", "must not be empty");
}

std::vector<Variant> variants(const RunConfig& cfg) {
  std::vector<Variant> out;
  const bool sweep = cfg.agent.beta.size() * cfg.run.modes.size() > 1;
  for (double beta : cfg.agent.beta) {
    for (AgentMode mode : cfg.run.modes) {
      Variant v{beta, mode, {}};
      if (sweep) v.label = std::string(mode_name(mode)) + "_beta" + stats::format_double(beta);
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::unique_ptr<DseEnvironment> make_environment(const EnvSpec& spec) {
  if (spec.type == EnvType::reward_table) return std::make_unique<RewardTableEnv>(load_reward_table(spec.table));
  if (!spec.path.empty()) {
    return std::make_unique<BinaryTreeEnv>(spec.layers, spec.reward_exponent,
                                           from_bitstring(spec.path));
  }
  return std::make_unique<BinaryTreeEnv>(
      BinaryTreeEnv::with_seeded_path(spec.layers, spec.reward_exponent, spec.path_seed));
}

std::unique_ptr<SequencePolicy> make_policy(const AgentSpec& spec, double beta, const DseEnvironment& env) {
  if (spec.policy == PolicyType::hvalue_tree) {
    if (!env.space().is_binary()) throw ContractViolation("hvalue_tree policy needs binary steps");
    return std::make_unique<HValueTreePolicy>(env.epoch_length(), beta);
  }
  return std::make_unique<MapPolicy>(env.space(), env.initial_percept(), beta, map_update_rule(spec.update_rule));
}

amplify::SearchParams search_params(const RunConfig& cfg, AgentMode mode) {
  amplify::SearchParams p;
  p.lambda = cfg.search.lambda;
  p.alpha_o = cfg.search.alpha_o;
  if (mode == AgentMode::nisq) p.k_max = cfg.search.k_max;
  p.attempt_budget = cfg.search.attempt_budget;
  return p;
}

agents::ModeSwitchRule switch_rule(const RunConfig& cfg) {
  const auto& s = cfg.switching;
  auto q_max = [&] { return amplify::q_max_threshold(cfg.search.alpha_o, 1); };
  switch (s.rule) {
    case SwitchType::always_quantum:
      return agents::AlwaysQuantum{};
    case SwitchType::q_threshold:
      if (cfg.run.firewall) return agents::RewardFrequency{s.window, s.frequency.value_or(q_max())};
      return agents::QThreshold{s.q_stop.value_or(q_max())};
    case SwitchType::reward_frequency:
      return agents::RewardFrequency{s.window, s.frequency.value_or(q_max())};
    case SwitchType::reward_count:
      return agents::RewardCount{s.rewards};
  }
  return agents::AlwaysQuantum{};
}

agents::StopRule stop_rule(const RunConfig& cfg) {
  agents::StopRule s;
  s.q_learned = cfg.stop.q_learned;
  s.rewards = cfg.stop.rewards;
  s.epoch_budget = cfg.stop.epoch_budget;
  return s;
}

agents::HybridOptions hybrid_options(const RunConfig& cfg) {
  agents::HybridOptions o;
  o.backend = cfg.run.backend;
  o.firewall = cfg.run.firewall;
  o.q_min = cfg.run.q_min;
  o.statevector_limit = cfg.run.statevector_limit;
  o.enumeration_limit = cfg.run.enumeration_limit;
  return o;
}

std::optional<double> reporting_threshold(const RunConfig& cfg) {
  return cfg.output.learning_threshold ? cfg.output.learning_threshold : cfg.stop.q_learned;
}

}  // namespace qrl::cli
