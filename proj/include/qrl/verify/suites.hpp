#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qrl/agents/trace.hpp"
#include "qrl/rng.hpp"
#include "qrl/stats/bounds.hpp"

namespace qrl::verify {

using Checks = std::vector<stats::CheckResult>;
using Sink = std::function<void(const stats::CheckResult&)>;

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  unsigned workers = 1;
};

// Runs `n` independent agents; agent i gets derive_rng(seed, i). Results are
// returned in agent order whatever the worker count.
std::vector<agents::AgentTrace> run_ensemble(std::uint64_t n, std::uint64_t seed, unsigned workers,
                                             const std::function<agents::AgentTrace(std::uint64_t, Rng&)>& agent);

// |measured - expected| <= tol; sigma_margin is the unused fraction of tol.
stats::CheckResult tolerance_check(std::string name, double measured, double expected, double tol);
// A p-value of at least alpha.
stats::CheckResult p_value_check(std::string name, double p_value, double alpha);
stats::CheckResult runtime_check(std::string name, double seconds, double limit_seconds);

// Threshold root for alpha_o = 1, k = 1, its residual, monotonicity, runtime.
Checks qmax_checks();
// G(q_kmax(k), k) = 1 for k <= 50 and strict decrease of q_kmax.
Checks qkmax_checks();
// Statevector G-law, norm and ratio preservation on 100 random tree
// policies, and analytic vs statevector sampling equivalence.
Checks glaw_checks(const VerifyOptions& opt);
// Per-epoch reward rate of k = 1 play against classical play at Q = 0.35 and
// Q = 0.45 (alpha_o = 1).
Checks turnover_checks(const VerifyOptions& opt);
// Exponential search cost on the fresh 12-layer tree, unrestricted and with
// k_max caps.
Checks search_checks(const VerifyOptions& opt);

// Rewarded-history distribution equality on the 3-layer tree.
Checks theorem1_checks(const VerifyOptions& opt);
// Classical first-interval law on the fresh 12-layer tree.
Checks geometric_checks(const VerifyOptions& opt);
// Pooled interval law, learning-time decomposition and hybrid interval means.
Checks interval_checks(const VerifyOptions& opt);
Checks theorem2_checks(const VerifyOptions& opt);
Checks theorem3_checks(const VerifyOptions& opt);
// Byte-identical CSV output for repeated runs and different worker counts.
Checks determinism_checks(const VerifyOptions& opt);

std::vector<std::string_view> suite_names();

// Runs a named suite, passing each check to `sink` as it completes. Returns
// true iff every check passed. Throws ContractViolation for unknown names.
bool run_suite(std::string_view name, const VerifyOptions& opt, const Sink& sink);

}  // namespace qrl::verify
