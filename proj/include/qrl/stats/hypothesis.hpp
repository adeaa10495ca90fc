#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qrl/rng.hpp"

namespace qrl::stats {

struct TestResult {
  double statistic = 0.0;
  double dof = 0.0;  // chi-square degrees of freedom; 0 for KS
  double p_value = 1.0;

  bool rejects(double alpha) const { return p_value < alpha; }
};

// Chi-square goodness of fit of observed category counts against category
// probabilities. Categories with expected count below kMinExpectedCount are
// pooled into one.
TestResult chi_square_goodness_of_fit(std::span<const std::uint64_t> observed, std::span<const double> probabilities);

// Chi-square test that two count vectors over the same categories come from
// one distribution. Categories with pooled expected count below
// kMinExpectedCount in either sample are merged; empty categories are dropped.
TestResult chi_square_homogeneity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

// P(K > x) for the Kolmogorov distribution.
double kolmogorov_survival(double x);

// One-sample KS against a continuous CDF, with the small-sample
// (sqrt(n) + 0.12 + 0.11/sqrt(n)) scaling of the statistic.
TestResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// KS for integer-valued samples against a discrete CDF: D is the largest
// deviation of the empirical CDF over the integers. The p-value from the
// continuous Kolmogorov law is conservative here.
TestResult ks_test_discrete(std::span<const std::uint64_t> samples, const std::function<double(std::uint64_t)>& cdf);

// Geometric law on {1, 2, ...}: P(t) = q (1 - q)^(t - 1).
double geometric_cdf(std::uint64_t t, double q);

// Randomized probability integral transform of a geometric(q) draw: uniform
// on [0, 1) exactly when t is geometric(q). Lets draws with different q be
// pooled in one uniformity test.
double geometric_pit(std::uint64_t t, double q, Rng& rng);

}  // namespace qrl::stats
