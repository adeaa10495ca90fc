#pragma once

#include <cstdint>
#include <vector>

#include "qrl/cli/simulate.hpp"
#include "qrl/verify/suites.hpp"

namespace qrl::verify {

inline constexpr std::uint64_t kFig3Horizon = 5000;

struct Fig3Options {
  std::uint64_t agents = 5000;
  std::uint64_t horizon = kFig3Horizon;
  std::uint64_t seed = 20240611;
  unsigned workers = 1;
  // Accounting of the time axis; amplification epochs count as reward-0
  // epochs by default.
  stats::CurveAccounting accounting = stats::CurveAccounting::all_epochs;
};

// The 12-layer, 2^5-rewarded-leaf tree with beta in {0.01, 0.1}, classical
// and hybrid agents, fixed horizon.
cli::RunConfig fig3_config(const Fig3Options& opt);

struct Fig3Run {
  double beta = 0.0;
  cli::VariantResult classical;
  cli::VariantResult hybrid;
  // The hybrid run again with only unamplified epochs on the time axis.
  cli::VariantResult hybrid_unamplified;
};

std::vector<Fig3Run> run_fig3(const Fig3Options& opt);

// Checks on finished runs:
//  (a) hybrid mean reward >= classical - 2 sigma at every epoch of the
//      learning phase, which ends when the classical 50-epoch moving average
//      first reaches 90% of its plateau;
//  (b) hybrid and classical plateaus (per-agent mean over the last 20% of
//      the horizon) agree within 2 sigma for each beta;
//  (c) beta = 0.1 reaches half its plateau sooner than beta = 0.01, and its
//      plateau is lower by more than 2 sigma.
// (a) is also reported with the hybrid curve on the unamplified time axis.
Checks fig3_evaluate(const std::vector<Fig3Run>& runs, std::uint64_t horizon);

Checks fig3_checks(const Fig3Options& opt);

}  // namespace qrl::verify
