#include "qrl/cli/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "qrl/errors.hpp"
#include "qrl/stats/summary.hpp"

namespace qrl::cli {

unsigned worker_count() {
  if (const char* env = std::getenv("QRL_WORKERS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

AgentRow agent_row(const RunConfig& cfg, std::uint64_t agent_id, const agents::AgentTrace& trace) {
  AgentRow row;
  row.agent_id = agent_id;
  row.total_epochs = trace.total_epochs;
  if (const auto q_l = reporting_threshold(cfg)) {
    const stats::LearningTime lt = stats::learning_time(trace, *q_l);
    row.T = lt.T;
    row.J = lt.J;
    row.censored = lt.censored;
  } else if (cfg.stop.rewards) {
    const std::uint64_t want = *cfg.stop.rewards;
    row.censored = trace.rewards.size() < want;
    row.J = std::min<std::uint64_t>(want, trace.rewards.size());
    row.T = row.censored ? trace.total_epochs : trace.rewards[want - 1].epoch;
  } else {
    row.T = trace.total_epochs;
    row.J = trace.rewards.size();
    row.censored = trace.censored;
  }
  return row;
}

namespace {

struct ChunkResult {
  stats::CurveAccumulator curve;
  std::vector<AgentRow> rows;
  std::vector<double> tails;
};

}  // namespace

VariantResult run_variant(const RunConfig& cfg, const Variant& variant, const DseEnvironment& env,
                          const SimulateOptions& options) {
  const std::uint64_t horizon = cfg.stop.epoch_budget;
  const std::uint64_t n = cfg.run.agents;
  const std::uint64_t chunk = std::max<std::uint64_t>(1, options.chunk_size);
  const std::uint64_t chunks = (n + chunk - 1) / chunk;
  const agents::StopRule stop = stop_rule(cfg);
  const amplify::SearchParams params = search_params(cfg, variant.mode);
  const agents::ModeSwitchRule rule = switch_rule(cfg);
  const agents::HybridOptions hopt = hybrid_options(cfg);
  const std::unique_ptr<SequencePolicy> prototype = make_policy(cfg.agent, variant.beta, env);

  auto run_chunk = [&](std::uint64_t c) {
    ChunkResult out{stats::CurveAccumulator(horizon, cfg.output.accounting), {}, {}};
    const std::uint64_t end = std::min(n, (c + 1) * chunk);
    for (std::uint64_t i = c * chunk; i < end; ++i) {
      Rng rng = derive_rng(cfg.run.seed, i);
      auto policy = prototype->clone();
      agents::AgentTrace trace =
          variant.mode == AgentMode::classical
              ? agents::run_classical(*policy, env, stop, rng, true, cfg.run.enumeration_limit)
              : agents::run_hybrid(*policy, env, params, rule, stop, rng, hopt);
      out.curve.add(trace);
      out.rows.push_back(agent_row(cfg, i, trace));
      if (options.tail_first) {
        out.tails.push_back(stats::trace_window_mean(trace, *options.tail_first, horizon, cfg.output.accounting));
      }
    }
    return out;
  };

  VariantResult result{variant, {}, {}, {}};
  stats::CurveAccumulator total(horizon, cfg.output.accounting);
  std::mutex mu;
  std::map<std::uint64_t, ChunkResult> pending;
  std::uint64_t next_merge = 0;
  std::exception_ptr error;
  auto absorb = [&](std::uint64_t c, ChunkResult r) {
    std::lock_guard lock(mu);
    pending.emplace(c, std::move(r));
    for (auto it = pending.find(next_merge); it != pending.end(); it = pending.find(next_merge)) {
      total.merge(it->second.curve);
      result.agents.insert(result.agents.end(), it->second.rows.begin(), it->second.rows.end());
      result.tail_means.insert(result.tail_means.end(), it->second.tails.begin(), it->second.tails.end());
      pending.erase(it);
      ++next_merge;
    }
  };

  std::atomic<std::uint64_t> next_chunk{0};
  auto worker = [&] {
    while (true) {
      const std::uint64_t c = next_chunk.fetch_add(1);
      if (c >= chunks) return;
      try {
        absorb(c, run_chunk(c));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        next_chunk.store(chunks);
        return;
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  result.curve = total.curve();
  return result;
}

std::vector<std::filesystem::path> cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir,
                                                unsigned workers) {
  validate(cfg);
  const auto env = make_environment(cfg.env);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "config.ini", to_ini(cfg));
  std::vector<std::filesystem::path> dirs;
  for (const Variant& v : variants(cfg)) {
    const std::filesystem::path dir = v.label.empty() ? out_dir : out_dir / v.label;
    std::filesystem::create_directories(dir);
    const VariantResult r = run_variant(cfg, v, *env, {workers, 32, std::nullopt});
    std::ostringstream curve, agents;
    write_curve_csv(curve, r.curve);
    write_agents_csv(agents, r.agents);
    write_file(dir / "curve.csv", curve.str());
    write_file(dir / "agents.csv", agents.str());
    dirs.push_back(dir);
  }
  return dirs;
}

}  // namespace qrl::cli
