#include "qrl/cli/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qrl/stats/bounds.hpp"

namespace qrl::cli {

namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse(std::string_view s, std::size_t line_no) {
  T x{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad field '" + std::string(s) + "'");
  }
  return x;
}

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw std::runtime_error("csv header mismatch, expected '" + std::string(header) + "'");
  }
}

constexpr std::string_view kCurveHeader = "epoch,mean_reward,stderr,n_alive";
constexpr std::string_view kAgentsHeader = "agent_id,T,J,censored,total_epochs";

}  // namespace

void write_curve_csv(std::ostream& os, std::span<const stats::CurvePoint> curve) {
  os << kCurveHeader << '\n';
  for (const auto& p : curve) {
    os << p.epoch << ',' << stats::format_double(p.mean_reward) << ',' << stats::format_double(p.stderr) << ','
       << p.n_alive << '\n';
  }
}

std::vector<stats::CurvePoint> read_curve_csv(std::istream& in) {
  expect_header(in, kCurveHeader);
  std::vector<stats::CurvePoint> out;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = fields(line);
    if (f.size() != 4) throw std::runtime_error("csv line " + std::to_string(n) + ": expected 4 fields");
    out.push_back({parse<std::uint64_t>(f[0], n), parse<double>(f[1], n), parse<double>(f[2], n),
                   parse<std::uint64_t>(f[3], n)});
  }
  return out;
}

void write_agents_csv(std::ostream& os, std::span<const AgentRow> rows) {
  os << kAgentsHeader << '\n';
  for (const auto& r : rows) {
    os << r.agent_id << ',' << r.T << ',' << r.J << ',' << (r.censored ? 1 : 0) << ',' << r.total_epochs << '\n';
  }
}

std::vector<AgentRow> read_agents_csv(std::istream& in) {
  expect_header(in, kAgentsHeader);
  std::vector<AgentRow> out;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = fields(line);
    if (f.size() != 5) throw std::runtime_error("csv line " + std::to_string(n) + ": expected 5 fields");
    const auto censored = parse<int>(f[3], n);
    if (censored != 0 && censored != 1) throw std::runtime_error("csv line " + std::to_string(n) + ": censored not 0/1");
    out.push_back({parse<std::uint64_t>(f[0], n), parse<std::uint64_t>(f[1], n), parse<std::uint64_t>(f[2], n),
                   censored == 1, parse<std::uint64_t>(f[4], n)});
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qrl::cli
