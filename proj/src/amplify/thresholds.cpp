#include <cmath>
#include <numbers>

#include "qrl/amplify/grover.hpp"
#include "qrl/errors.hpp"

namespace qrl::amplify {

double grover_success_prob(double q, std::uint64_t k) {
  if (!(q >= 0.0 && q <= 1.0)) throw ContractViolation("winning probability must lie in [0, 1]");
  const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * std::asin(std::sqrt(q)));
  return s * s;
}

double q_kmax(std::uint64_t k_max) {
  const double s = std::sin(std::numbers::pi / (2.0 * (2.0 * static_cast<double>(k_max) + 1.0)));
  return s * s;
}

double turnover_margin(double q, std::uint32_t alpha_o, std::uint64_t k) {
  return grover_success_prob(q, k) / (static_cast<double>(alpha_o) * static_cast<double>(k) + 1.0) - q;
}

double q_max_threshold(std::uint32_t alpha_o, std::uint64_t k) {
  if (alpha_o < 1) throw ContractViolation("alpha_o must be at least 1");
  if (k < 1) throw ContractViolation("k must be at least 1");
  // For larger k the margin has further positive lobes; the threshold is the
  // first sign change, where quantum play stops winning from Q = 0 upwards.
  constexpr int kGrid = 20000;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 1; i <= kGrid; ++i) {
    const double q = static_cast<double>(i) / kGrid;
    if (turnover_margin(q, alpha_o, k) <= 0.0) {
      lo = static_cast<double>(i - 1) / kGrid;
      hi = q;
      break;
    }
  }
  if (lo == 0.0 && turnover_margin(hi / 2.0, alpha_o, k) <= 0.0) return 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (turnover_margin(mid, alpha_o, k) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qrl::amplify
