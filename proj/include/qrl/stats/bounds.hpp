#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qrl/stats/summary.hpp"

namespace qrl::stats {

// One line of a verification report.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  // (bound - measured) in units of the combined standard error for upper
  // bounds; the meaning for other checks is stated by the check.
  double sigma_margin = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> extra;
};

// check=<name> measured=<v> bound=<v> sigma_margin=<v> verdict=PASS|FAIL [k=v ...]
std::string format_check(const CheckResult& c);

// Numbers in reports and CSV files: shortest round-trip form.
std::string format_double(double x);

// measured <= bound, failing only when the excess is beyond `sigmas`
// combined standard errors.
CheckResult upper_bound_check(std::string name, double measured, double measured_se, double bound, double bound_se,
                              double sigmas);

// |a - b| within `sigmas` combined standard errors.
CheckResult equality_check(std::string name, double a, double a_se, double b, double b_se, double sigmas);

// <T>_q <= alpha_s alpha_o sqrt(<T>_c <J>) with <J> from the classical
// ensemble. Reports the effective constant <T>_q / sqrt(<T>_c <J>) as
// alpha_hat. Throws ContractViolation when the summaries use different Q_l.
CheckResult theorem2_bound_check(const LearningTimeSummary& classical, const LearningTimeSummary& hybrid,
                                 double alpha_s, std::uint32_t alpha_o);

struct Theorem3Report {
  CheckResult bound;
  double ratio = 0.0;  // <T>_q / <T>_c
  double ratio_se = 0.0;
  // alpha_o <T>_c / (4 k_max), the large-beta estimate of <T>_q.
  double refinement = 0.0;
};

// <T>_q <= (alpha_o pi^2 / 16) <T>_c / k_max for a k_max-limited agent.
// Refuses k_max = 0 and thresholds q_l >= q_kmax(k_max) with
// ContractViolation.
Theorem3Report theorem3_bound_check(const LearningTimeSummary& classical, const LearningTimeSummary& nisq,
                                    std::uint32_t alpha_o, std::uint64_t k_max, double q_l);

}  // namespace qrl::stats
