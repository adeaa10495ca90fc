#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "qrl/stats/curve.hpp"

namespace qrl::cli {

struct AgentRow {
  std::uint64_t agent_id = 0;
  std::uint64_t T = 0;
  std::uint64_t J = 0;
  bool censored = false;
  std::uint64_t total_epochs = 0;

  friend bool operator==(const AgentRow&, const AgentRow&) = default;
};

// curve.csv: epoch,mean_reward,stderr,n_alive
void write_curve_csv(std::ostream& os, std::span<const stats::CurvePoint> curve);
std::vector<stats::CurvePoint> read_curve_csv(std::istream& in);

// agents.csv: agent_id,T,J,censored,total_epochs
void write_agents_csv(std::ostream& os, std::span<const AgentRow> rows);
std::vector<AgentRow> read_agents_csv(std::istream& in);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace qrl::cli
