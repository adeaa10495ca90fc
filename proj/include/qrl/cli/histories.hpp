#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qrl/cli/config.hpp"
#include "qrl/stats/distribution.hpp"

namespace qrl::cli {

// "011|110": the sequences of a history joined by '|', each as a bit string
// for binary spaces and as its index otherwise.
std::string history_label(const SequenceSpace& space, const stats::HistoryKey& key);

// history,probability
void write_exact_histories_csv(std::ostream& os, const SequenceSpace& space, const stats::HistoryDistribution& d);
// history,count,frequency
void write_empirical_histories_csv(std::ostream& os, const SequenceSpace& space, const stats::EmpiricalHistories& e);

// Writes exact.csv and one <variant>.csv per sweep point with the
// distribution of the first `depth` rewarded sequences. The stop rule is
// replaced by "collect `depth` rewards" within the configured epoch budget;
// agents that miss it are left out of the table and counted in the result.
struct HistoriesResult {
  std::vector<std::filesystem::path> files;
  std::uint64_t incomplete = 0;
};

HistoriesResult cmd_histories(const RunConfig& cfg, std::size_t depth, const std::filesystem::path& out_dir);

}  // namespace qrl::cli
