#pragma once

// Error budgets for every statistical acceptance decision in the project.
namespace qrl::stats {

// Means and bound checks: a check fails only when the violation exceeds this
// many combined standard errors.
inline constexpr double kMeanSigmas = 3.0;
// Distribution comparisons: total variation must stay below this many sigma
// of the multinomial sampling noise, summed over categories.
inline constexpr double kDistributionSigmas = 4.0;
// Pointwise curve comparisons.
inline constexpr double kCurveSigmas = 2.0;
// Significance level of KS and chi-square tests.
inline constexpr double kTestAlpha = 0.01;
// Expected count below which chi-square categories are pooled.
inline constexpr double kMinExpectedCount = 5.0;

}  // namespace qrl::stats
