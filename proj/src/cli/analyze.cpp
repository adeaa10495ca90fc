#include "qrl/cli/analyze.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qrl/stats/bounds.hpp"

namespace qrl::cli {

stats::LearningTimeSummary summarize_rows(std::span<const AgentRow> rows) {
  std::vector<stats::LearningTime> times;
  times.reserve(rows.size());
  for (const auto& r : rows) times.push_back({r.T, r.J, r.censored});
  return stats::summarize(times, 0.0);
}

std::size_t cmd_analyze(const std::filesystem::path& dir, std::ostream& out) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<fs::path> dirs;
  if (fs::exists(dir / "agents.csv")) dirs.push_back(dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "agents.csv")) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw std::runtime_error("no agents.csv under " + dir.string());
  using stats::format_double;
  for (const auto& d : dirs) {
    std::ifstream in(d / "agents.csv");
    const auto rows = read_agents_csv(in);
    const auto s = summarize_rows(rows);
    std::uint64_t epochs = 0;
    for (const auto& r : rows) epochs += r.total_epochs;
    out << "run=" << (d == dir ? std::string(".") : d.filename().string()) << " agents=" << rows.size()
        << " censored=" << s.censored_count << " mean_T=" << format_double(s.mean_T)
        << " stderr_T=" << format_double(s.stderr_T()) << " mean_T_with_censored=" << format_double(s.mean_T_with_censored)
        << " mean_J=" << format_double(s.mean_J) << " stderr_J=" << format_double(s.stderr_J())
        << " total_epochs=" << epochs << '\n';
  }
  return dirs.size();
}

}  // namespace qrl::cli
