#include "qrl/cli/histories.hpp"

#include <ostream>
#include <set>
#include <sstream>

#include "qrl/cli/csv.hpp"
#include "qrl/errors.hpp"
#include "qrl/stats/bounds.hpp"

namespace qrl::cli {

std::string history_label(const SequenceSpace& space, const stats::HistoryKey& key) {
  std::string out;
  for (std::size_t j = 0; j < key.size(); ++j) {
    if (j) out += '|';
    out += space.is_binary() ? to_bitstring(space.sequence_at(key[j])) : std::to_string(key[j]);
  }
  return out;
}

void write_exact_histories_csv(std::ostream& os, const SequenceSpace& space, const stats::HistoryDistribution& d) {
  os << "history,probability\n";
  for (const auto& [key, p] : d.probabilities) {
    os << history_label(space, key) << ',' << stats::format_double(p) << '\n';
  }
}

void write_empirical_histories_csv(std::ostream& os, const SequenceSpace& space, const stats::EmpiricalHistories& e) {
  os << "history,count,frequency\n";
  for (const auto& [key, c] : e.counts) {
    os << history_label(space, key) << ',' << c << ','
       << stats::format_double(static_cast<double>(c) / static_cast<double>(e.n)) << '\n';
  }
}

HistoriesResult cmd_histories(const RunConfig& cfg, std::size_t depth, const std::filesystem::path& out_dir) {
  if (depth == 0) throw ContractViolation("history depth must be at least 1");
  RunConfig run = cfg;
  run.stop.q_learned.reset();
  run.stop.rewards = depth;
  validate(run);
  const auto env = make_environment(run.env);
  const agents::StopRule stop = stop_rule(run);
  const agents::ModeSwitchRule rule = switch_rule(run);
  agents::HybridOptions hopt = hybrid_options(run);
  hopt.keep_records = false;

  std::filesystem::create_directories(out_dir);
  HistoriesResult result;
  const auto vars = variants(run);
  std::set<double> exact_done;
  for (const Variant& v : vars) {
    const auto prototype = make_policy(run.agent, v.beta, *env);
    // One exact table per beta; modes share it.
    if (exact_done.insert(v.beta).second) {
      const bool sweep_beta = run.agent.beta.size() > 1;
      const auto path = out_dir / (sweep_beta ? "exact_beta" + stats::format_double(v.beta) + ".csv" : "exact.csv");
      std::ostringstream os;
      write_exact_histories_csv(os, env->space(), stats::exact_history_distribution(*prototype, *env, depth));
      write_file(path, os.str());
      result.files.push_back(path);
    }

    const amplify::SearchParams params = search_params(run, v.mode);
    std::vector<agents::AgentTrace> traces;
    traces.reserve(run.run.agents);
    for (std::uint64_t i = 0; i < run.run.agents; ++i) {
      Rng rng = derive_rng(run.run.seed, i);
      auto policy = prototype->clone();
      agents::AgentTrace t = v.mode == AgentMode::classical
                                 ? agents::run_classical(*policy, *env, stop, rng, false, run.run.enumeration_limit)
                                 : agents::run_hybrid(*policy, *env, params, rule, stop, rng, hopt);
      if (t.history.size() < depth) {
        ++result.incomplete;
        continue;
      }
      traces.push_back(std::move(t));
    }
    if (traces.empty()) throw ContractViolation("no agent collected " + std::to_string(depth) + " rewards");
    std::ostringstream os;
    write_empirical_histories_csv(os, env->space(), stats::empirical_history_distribution(traces, depth));
    const auto path = out_dir / ((v.label.empty() ? std::string(mode_name(v.mode)) : v.label) + ".csv");
    write_file(path, os.str());
    result.files.push_back(path);
  }
  return result;
}

}  // namespace qrl::cli
