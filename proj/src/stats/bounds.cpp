#include "qrl/stats/bounds.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qrl/amplify/grover.hpp"
#include "qrl/errors.hpp"
#include "qrl/stats/thresholds.hpp"

namespace qrl::stats {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_check(const CheckResult& c) {
  std::ostringstream os;
  os << "check=" << c.name << " measured=" << format_double(c.measured) << " bound=" << format_double(c.bound)
     << " sigma_margin=" << format_double(c.sigma_margin) << " verdict=" << (c.pass ? "PASS" : "FAIL");
  for (const auto& [k, v] : c.extra) os << ' ' << k << '=' << format_double(v);
  return os.str();
}

CheckResult upper_bound_check(std::string name, double measured, double measured_se, double bound, double bound_se,
                              double sigmas) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.bound = bound;
  const double se = std::hypot(measured_se, bound_se);
  const double gap = bound - measured;
  c.sigma_margin = se > 0.0 ? gap / se : (gap >= 0.0 ? INFINITY : -INFINITY);
  c.pass = measured <= bound + sigmas * se;
  return c;
}

CheckResult equality_check(std::string name, double a, double a_se, double b, double b_se, double sigmas) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = a;
  c.bound = b;
  const double se = std::hypot(a_se, b_se);
  const double gap = std::abs(a - b);
  c.sigma_margin = se > 0.0 ? (sigmas * se - gap) / se : (gap == 0.0 ? INFINITY : -INFINITY);
  c.pass = gap <= sigmas * se;
  return c;
}

CheckResult theorem2_bound_check(const LearningTimeSummary& classical, const LearningTimeSummary& hybrid,
                                 double alpha_s, std::uint32_t alpha_o) {
  if (classical.q_l != hybrid.q_l) throw ContractViolation("summaries use different learning thresholds");
  if (classical.n == 0 || hybrid.n == 0) throw ContractViolation("no uncensored agents");
  const double alpha = alpha_s * alpha_o;
  const double tc = classical.mean_T, j = classical.mean_J, tq = hybrid.mean_T;
  const double base = std::sqrt(tc * j);
  const double bound = alpha * base;
  double bound_se = 0.0;
  if (tc > 0.0 && j > 0.0) {
    // delta method on sqrt(T J), keeping the T-J covariance
    const double n = static_cast<double>(classical.n);
    const double rel_var = (classical.std_T * classical.std_T / (tc * tc) +
                            classical.std_J * classical.std_J / (j * j) + 2.0 * classical.cov_TJ / (tc * j)) /
                           n;
    bound_se = 0.5 * bound * std::sqrt(std::max(rel_var, 0.0));
  }
  CheckResult c = upper_bound_check("theorem2", tq, hybrid.stderr_T(), bound, bound_se, kMeanSigmas);
  c.extra = {{"alpha_hat", base > 0.0 ? tq / base : 0.0},
             {"T_c", tc},
             {"T_q", tq},
             {"J", j},
             {"censored_c", static_cast<double>(classical.censored_count)},
             {"censored_q", static_cast<double>(hybrid.censored_count)}};
  return c;
}

Theorem3Report theorem3_bound_check(const LearningTimeSummary& classical, const LearningTimeSummary& nisq,
                                    std::uint32_t alpha_o, std::uint64_t k_max, double q_l) {
  if (k_max == 0) throw ContractViolation("k_max = 0 performs no amplification; the bound does not apply");
  if (!(q_l < amplify::q_kmax(k_max))) {
    throw ContractViolation("learning threshold must lie below q_kmax(k_max)");
  }
  if (classical.q_l != q_l || nisq.q_l != q_l) throw ContractViolation("summaries use different learning thresholds");
  if (classical.n == 0 || nisq.n == 0) throw ContractViolation("no uncensored agents");
  const double factor = alpha_o * std::numbers::pi * std::numbers::pi / 16.0 / static_cast<double>(k_max);
  Theorem3Report r;
  r.bound = upper_bound_check("theorem3_kmax" + std::to_string(k_max), nisq.mean_T, nisq.stderr_T(),
                              factor * classical.mean_T, factor * classical.stderr_T(), kMeanSigmas);
  const double tc = classical.mean_T, tq = nisq.mean_T;
  r.ratio = tc > 0.0 ? tq / tc : 0.0;
  if (tc > 0.0 && tq > 0.0) {
    r.ratio_se = r.ratio * std::hypot(nisq.stderr_T() / tq, classical.stderr_T() / tc);
  }
  r.refinement = alpha_o * tc / (4.0 * static_cast<double>(k_max));
  r.bound.extra = {{"ratio", r.ratio},
                   {"ratio_bound", factor},
                   {"refinement", r.refinement},
                   {"censored_c", static_cast<double>(classical.censored_count)},
                   {"censored_q", static_cast<double>(nisq.censored_count)}};
  return r;
}

}  // namespace qrl::stats
