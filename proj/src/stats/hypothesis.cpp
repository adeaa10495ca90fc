#include "qrl/stats/hypothesis.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "qrl/errors.hpp"
#include "qrl/stats/kahan.hpp"
#include "qrl/stats/thresholds.hpp"

namespace qrl::stats {

namespace {

double chi_square_p(double statistic, double dof) {
  if (dof < 1.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

}  // namespace

TestResult chi_square_goodness_of_fit(std::span<const std::uint64_t> observed, std::span<const double> probabilities) {
  if (observed.size() != probabilities.size()) throw ContractViolation("category count mismatch");
  double n = 0.0;
  for (auto c : observed) n += static_cast<double>(c);
  if (n == 0.0) throw ContractViolation("no observations");
  KahanSum stat;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = n * probabilities[i];
    const double obs = static_cast<double>(observed[i]);
    if (expected < kMinExpectedCount) {
      if (expected == 0.0 && obs > 0.0) return {INFINITY, static_cast<double>(observed.size() - 1), 0.0};
      pooled_obs += obs;
      pooled_exp += expected;
      continue;
    }
    stat += (obs - expected) * (obs - expected) / expected;
    ++bins;
  }
  if (pooled_exp > 0.0) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++bins;
  }
  const double dof = bins > 0 ? static_cast<double>(bins - 1) : 0.0;
  return {stat.value(), dof, chi_square_p(stat.value(), dof)};
}

TestResult chi_square_homogeneity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw ContractViolation("category count mismatch");
  double na = 0.0, nb = 0.0;
  for (auto c : a) na += static_cast<double>(c);
  for (auto c : b) nb += static_cast<double>(c);
  if (na == 0.0 || nb == 0.0) throw ContractViolation("empty sample");
  const double n = na + nb;
  std::vector<std::pair<double, double>> cells;
  std::pair<double, double> pooled{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ca = static_cast<double>(a[i]), cb = static_cast<double>(b[i]);
    const double col = ca + cb;
    if (col == 0.0) continue;
    if (std::min(col * na / n, col * nb / n) < kMinExpectedCount) {
      pooled.first += ca;
      pooled.second += cb;
    } else {
      cells.emplace_back(ca, cb);
    }
  }
  if (pooled.first + pooled.second > 0.0) cells.push_back(pooled);
  KahanSum stat;
  for (const auto& [ca, cb] : cells) {
    const double col = ca + cb;
    const double ea = col * na / n, eb = col * nb / n;
    stat += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  const double dof = cells.empty() ? 0.0 : static_cast<double>(cells.size() - 1);
  return {stat.value(), dof, chi_square_p(stat.value(), dof)};
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  KahanSum s;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(s.value(), 0.0, 1.0);
}

namespace {

TestResult ks_result(double d, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  return {d, 0.0, kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d)};
}

}  // namespace

TestResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ContractViolation("no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return ks_result(d, samples.size());
}

TestResult ks_test_discrete(std::span<const std::uint64_t> samples, const std::function<double(std::uint64_t)>& cdf) {
  if (samples.empty()) throw ContractViolation("no samples");
  std::vector<std::uint64_t> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  // Between support points the empirical CDF is flat, so checking F_n(t) and
  // F_n(t-1) at every distinct sample value t covers all integers where the
  // gap can peak; the model CDF is non-decreasing in between.
  std::size_t i = 0;
  while (i < sorted.size()) {
    const std::uint64_t t = sorted[i];
    const double below = static_cast<double>(i) / n;
    const double f_prev = t > 0 ? cdf(t - 1) : 0.0;
    d = std::max(d, std::abs(f_prev - below));
    while (i < sorted.size() && sorted[i] == t) ++i;
    d = std::max(d, std::abs(cdf(t) - static_cast<double>(i) / n));
  }
  return ks_result(d, sorted.size());
}

double geometric_cdf(std::uint64_t t, double q) {
  if (t == 0) return 0.0;
  return -std::expm1(static_cast<double>(t) * std::log1p(-q));
}

double geometric_pit(std::uint64_t t, double q, Rng& rng) {
  const double lo = geometric_cdf(t - 1, q);
  const double hi = geometric_cdf(t, q);
  return lo + uniform01(rng) * (hi - lo);
}

}  // namespace qrl::stats
