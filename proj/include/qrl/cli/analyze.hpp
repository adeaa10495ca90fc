#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "qrl/cli/csv.hpp"
#include "qrl/stats/summary.hpp"

namespace qrl::cli {

stats::LearningTimeSummary summarize_rows(std::span<const AgentRow> rows);

// Recomputes learning-time summaries from every agents.csv found in `dir`
// (the directory itself and its immediate subdirectories) and prints one
// line per directory. Returns the number of directories summarized.
std::size_t cmd_analyze(const std::filesystem::path& dir, std::ostream& out);

}  // namespace qrl::cli
