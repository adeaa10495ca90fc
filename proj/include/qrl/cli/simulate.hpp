#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "qrl/cli/config.hpp"
#include "qrl/cli/csv.hpp"

namespace qrl::cli {

// Worker threads from QRL_WORKERS, else the hardware concurrency.
unsigned worker_count();

struct SimulateOptions {
  unsigned workers = 1;
  std::uint64_t chunk_size = 32;
  // When set, per-agent mean reward over epochs [tail_first, horizon].
  std::optional<std::uint64_t> tail_first;
};

struct VariantResult {
  Variant variant;
  std::vector<stats::CurvePoint> curve;
  std::vector<AgentRow> agents;
  std::vector<double> tail_means;  // empty unless requested
};

// Runs every agent of one sweep point. Agent i draws from
// derive_rng(seed, i) and results are reduced in agent order, so the output
// does not depend on the worker count.
VariantResult run_variant(const RunConfig& cfg, const Variant& variant, const DseEnvironment& env,
                          const SimulateOptions& options);

AgentRow agent_row(const RunConfig& cfg, std::uint64_t agent_id, const agents::AgentTrace& trace);

// Writes config.ini plus curve.csv and agents.csv per variant (in a
// subdirectory per variant for sweeps). Returns the variant directories.
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir,
                                                unsigned workers);

}  // namespace qrl::cli
