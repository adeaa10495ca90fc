#include "qrl/env/reward_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "qrl/errors.hpp"

namespace qrl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

RewardTableEnv::RewardTableEnv(SequenceSpace space, std::map<std::uint64_t, double> rewards)
    : DseEnvironment(std::move(space)), rewards_(std::move(rewards)) {
  if (rewards_.empty()) throw ContractViolation("reward table needs at least one rewarded sequence");
  ActionSequence a;
  for (const auto& [index, r] : rewards_) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ContractViolation("reward table entries must be positive and finite");
    this->space().sequence_at(index, a);
    for (std::size_t d = 0; d <= a.size(); ++d) {
      rewarded_prefixes_.insert(this->space().prefix_id(std::span(a.steps.data(), d)));
    }
  }
}

EpochOutcome RewardTableEnv::evaluate(const ActionSequence& a) const {
  space().validate(a);
  EpochOutcome out;
  out.percepts.reserve(a.size());
  for (std::size_t d = 1; d <= a.size(); ++d) out.percepts.push_back(space().prefix_id(std::span(a.steps.data(), d)));
  out.reward = reward(a);
  return out;
}

double RewardTableEnv::reward(const ActionSequence& a) const {
  const auto it = rewards_.find(space().index_of(a));
  return it == rewards_.end() ? 0.0 : it->second;
}

bool RewardTableEnv::may_reward(std::span<const std::uint32_t> prefix) const {
  return rewarded_prefixes_.contains(space().prefix_id(prefix));
}

RewardTableEnv parse_reward_table(std::string_view text) {
  std::map<std::uint64_t, double> rewards;
  std::size_t length = 0;
  std::size_t line_no = 0;
  std::optional<SequenceSpace> space;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const std::string where = "reward table line " + std::to_string(line_no);
    if (comma == std::string_view::npos) throw ContractViolation(where + ": expected 'bitstring,reward'");
    const std::string_view bits = trim(line.substr(0, comma));
    const std::string_view value = trim(line.substr(comma + 1));
    if (bits.empty()) throw ContractViolation(where + ": empty bit string");
    if (!space) {
      length = bits.size();
      space = SequenceSpace::binary(length);
    } else if (bits.size() != length) {
      throw ContractViolation(where + ": bit string length differs from earlier lines");
    }
    double r = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), r);
    if (ec != std::errc{} || ptr != value.data() + value.size()) throw ContractViolation(where + ": bad reward");
    const auto index = space->index_of(from_bitstring(bits));
    if (!rewards.emplace(index, r).second) throw ContractViolation(where + ": duplicate sequence");
  }
  if (!space) throw ContractViolation("reward table is empty");
  return RewardTableEnv(std::move(*space), std::move(rewards));
}

RewardTableEnv load_reward_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reward table " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_reward_table(buf.str());
}

}  // namespace qrl
