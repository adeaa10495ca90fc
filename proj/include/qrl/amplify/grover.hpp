#pragma once

#include <cstdint>

namespace qrl::amplify {

// Probability of a rewarded measurement after k amplitude-amplification
// iterations started from winning probability q:
// sin^2((2k + 1) arcsin(sqrt(q))).
double grover_success_prob(double q, std::uint64_t k);

// Smallest winning probability for which k_max iterations reach certainty:
// sin^2(pi / (2 (2 k_max + 1))).
double q_kmax(std::uint64_t k_max);

// Per-epoch reward-rate advantage of k-iteration play over classical play:
// G(q, k) / (alpha_o k + 1) - q.
double turnover_margin(double q, std::uint32_t alpha_o, std::uint64_t k);

// Winning probability at which k-iteration quantum play stops paying off per
// epoch: the end of the interval (0, Q_max) on which turnover_margin is
// positive, located by a grid scan and refined by bisection to 1e-12.
double q_max_threshold(std::uint32_t alpha_o, std::uint64_t k);

}  // namespace qrl::amplify
