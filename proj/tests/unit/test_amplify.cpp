#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qrl/amplify/backend.hpp"
#include "qrl/amplify/grover.hpp"
#include "qrl/amplify/search.hpp"
#include "qrl/amplify/statevector.hpp"
#include "qrl/env/binary_tree.hpp"
#include "qrl/env/reward_table.hpp"
#include "qrl/errors.hpp"
#include "qrl/policy/hvalue_tree.hpp"
#include "qrl/stats/hypothesis.hpp"
#include "qrl/stats/thresholds.hpp"

namespace qrl::amplify {
namespace {

// Roots of G(q, k) / (alpha_o k + 1) = q to 30 digits (mpmath findroot).
constexpr double kQMax11 = 0.396446609406726237799577818948;
constexpr double kQMax21 = 0.316987298107780676618138414624;
constexpr double kQMax12 = 0.193284612883609589954320218851;

// Rewarded mass after k iterations by explicit evolution of the
// two-dimensional (good, bad) amplitude pair: flip the good amplitude, then
// reflect about (sqrt q, sqrt(1 - q)) with 1 - 2|psi><psi|.
double two_level_oracle(double q, std::uint64_t k) {
  const long double g0 = std::sqrt(static_cast<long double>(q));
  const long double b0 = std::sqrt(1.0L - q);
  long double g = g0;
  long double b = b0;
  for (std::uint64_t i = 0; i < k; ++i) {
    g = -g;
    const long double overlap = g * g0 + b * b0;
    g -= 2 * overlap * g0;
    b -= 2 * overlap * b0;
  }
  return static_cast<double>(g * g / (g * g + b * b));
}

HValueTreePolicy random_policy(std::size_t layers, double beta, Rng& rng) {
  HValueTreePolicy p(layers, beta);
  for (std::uint64_t node = 1; node < (std::uint64_t{1} << layers); ++node) {
    p.set_h(node, {10.0 * uniform01(rng), 10.0 * uniform01(rng)});
  }
  return p;
}

TEST(GroverLaw, Examples) {
  for (double q : {0.0, 1e-6, 0.0078125, 0.3, 0.999, 1.0}) EXPECT_NEAR(grover_success_prob(q, 0), q, 1e-15);
  EXPECT_NEAR(grover_success_prob(0.25, 1), 1.0, 1e-15);
}

TEST(GroverLaw, MatchesTwoLevelEvolution) {
  for (double q : {1e-4, 0.0078125, 0.05, 0.2, 0.5, 0.9}) {
    for (std::uint64_t k = 0; k <= 40; ++k) EXPECT_NEAR(grover_success_prob(q, k), two_level_oracle(q, k), 1e-12);
  }
}

TEST(GroverLaw, RejectsOutOfRange) {
  EXPECT_THROW(grover_success_prob(-0.1, 1), ContractViolation);
  EXPECT_THROW(grover_success_prob(1.1, 1), ContractViolation);
}

TEST(QKmax, Examples) {
  EXPECT_NEAR(q_kmax(0), 1.0, 1e-15);
  EXPECT_NEAR(q_kmax(1), 0.25, 1e-15);
  for (std::uint64_t k = 0; k <= 50; ++k) {
    EXPECT_NEAR(grover_success_prob(q_kmax(k), k), 1.0, 1e-12);
    EXPECT_NEAR(two_level_oracle(q_kmax(k), k), 1.0, 1e-12);
    if (k > 0) EXPECT_LT(q_kmax(k), q_kmax(k - 1));
  }
}

TEST(QMax, MatchesIndependentRoots) {
  EXPECT_NEAR(q_max_threshold(1, 1), kQMax11, 1e-9);
  EXPECT_NEAR(q_max_threshold(2, 1), kQMax21, 1e-9);
  EXPECT_NEAR(q_max_threshold(1, 2), kQMax12, 1e-9);
  EXPECT_NEAR(q_max_threshold(3, 1), 0.25, 1e-9);
  EXPECT_NEAR(q_max_threshold(1, 1), 0.3964, 5e-4);
}

TEST(QMax, IsARootAndDecreasesInBothArguments) {
  for (std::uint32_t a = 1; a <= 4; ++a) {
    for (std::uint64_t k = 1; k <= 4; ++k) {
      const double q = q_max_threshold(a, k);
      EXPECT_NEAR(turnover_margin(q, a, k), 0.0, 1e-8);
      EXPECT_GT(turnover_margin(q / 2, a, k), 0.0);
      EXPECT_LT(q_max_threshold(a + 1, k), q);
      EXPECT_LT(q_max_threshold(a, k + 1), q);
    }
  }
  EXPECT_THROW(q_max_threshold(0, 1), ContractViolation);
  EXPECT_THROW(q_max_threshold(1, 0), ContractViolation);
}

TEST(Statevector, FreshPolicyIsUniform) {
  const auto env = BinaryTreeEnv::with_seeded_path(3, 1, 1);
  const auto s = statevector_prepare(HValueTreePolicy(3, 0.1), env);
  ASSERT_EQ(s.amplitudes.size(), 8u);
  for (double a : s.amplitudes) EXPECT_NEAR(a, 1.0 / std::sqrt(8.0), 1e-15);
  EXPECT_NEAR(s.squared_norm(), 1.0, 1e-12);
  EXPECT_NEAR(s.rewarded_mass(), 0.25, 1e-15);
}

TEST(Statevector, SquaredAmplitudesAreThePolicy) {
  Rng rng = derive_rng(20, 0);
  const auto env = BinaryTreeEnv::with_seeded_path(8, 3, 2);
  const auto p = random_policy(8, 0.2, rng);
  const auto s = statevector_prepare(p, env);
  const auto probs = enumerate_probabilities(p);
  for (std::size_t i = 0; i < probs.size(); ++i) EXPECT_NEAR(s.probability(i), probs[i], 1e-15);
  EXPECT_NEAR(s.squared_norm(), 1.0, 1e-12);
}

TEST(Statevector, GLawNormAndRatioOnRandomPolicies) {
  Rng rng = derive_rng(21, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t l = 1 + rng() % 10;
    const auto env = BinaryTreeEnv::with_seeded_path(l, rng() % (l + 1), rng());
    const auto p = random_policy(l, 0.05 + 0.2 * uniform01(rng), rng);
    auto s = statevector_prepare(p, env);
    const double q = winning_probability(p, env);
    EXPECT_NEAR(s.rewarded_mass(), q, 1e-12);
    const auto initial = s.amplitudes;
    for (std::uint64_t k = 1; k <= 25; ++k) {
      grover_iterate(s);
      EXPECT_NEAR(s.squared_norm(), 1.0, 1e-12);
      const double mass = s.rewarded_mass();
      EXPECT_NEAR(mass, grover_success_prob(q, k), 1e-10);
      if (mass > 1e-6) {
        for (std::size_t i = 0; i < initial.size(); ++i) {
          if (!s.rewarded[i]) continue;
          EXPECT_NEAR(s.probability(i) / mass, initial[i] * initial[i] / q, 1e-10);
        }
      }
    }
  }
}

TEST(Statevector, EmptyMaskLeavesRewardedMassAtZero) {
  const auto env = BinaryTreeEnv::with_seeded_path(4, 1, 3);
  auto s = statevector_prepare(HValueTreePolicy(4, 0.1), env);
  const std::vector<std::uint8_t> none(s.amplitudes.size(), 0);
  const std::vector<std::uint8_t> rewarded = s.rewarded;
  s.rewarded = none;
  for (int k = 0; k < 5; ++k) {
    grover_iterate(s, none);
    EXPECT_NEAR(s.rewarded_mass(), 0.0, 1e-15);
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < rewarded.size(); ++i) mass += rewarded[i] ? s.probability(i) : 0.0;
  EXPECT_NEAR(mass, 2.0 / 16.0, 1e-12);
}

TEST(Statevector, RefusesLargeSpaces) {
  const auto env = BinaryTreeEnv::with_seeded_path(12, 5, 1);
  EXPECT_THROW(statevector_prepare(HValueTreePolicy(12, 0.1), env, 1000), LimitExceeded);
}

TEST(Statevector, MeasurementOfABasisStateIsCertain) {
  const auto env = BinaryTreeEnv::with_seeded_path(3, 1, 1);
  auto s = statevector_prepare(HValueTreePolicy(3, 0.1), env);
  std::fill(s.amplitudes.begin(), s.amplitudes.end(), 0.0);
  s.amplitudes[5] = 1.0;
  Rng rng = derive_rng(22, 0);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(statevector_measure(s, rng), 5u);
}

TEST(Statevector, UniformMeasurement) {
  const auto env = BinaryTreeEnv::with_seeded_path(3, 1, 1);
  const auto s = statevector_prepare(HValueTreePolicy(3, 0.1), env);
  Rng rng = derive_rng(23, 0);
  std::vector<std::uint64_t> counts(8);
  const MeasurementTable table(s);
  for (int i = 0; i < 1'000'000; ++i) ++counts[table.draw(rng)];
  const std::vector<double> p(8, 0.125);
  for (auto c : counts) {
    EXPECT_NEAR(c / 1e6, 0.125, stats::kDistributionSigmas * std::sqrt(0.125 * 0.875 / 1e6));
  }
  EXPECT_GE(stats::chi_square_goodness_of_fit(counts, p).p_value, stats::kTestAlpha);

  Rng a = derive_rng(24, 1);
  Rng b = derive_rng(24, 1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(statevector_measure(s, a), statevector_measure(s, b));
}

TEST(Backends, EpochsConsumedAndCertainSuccess) {
  const auto env = BinaryTreeEnv::with_seeded_path(2, 0, 1);  // one rewarded leaf of four
  const HValueTreePolicy p(2, 0.1);
  Rng rng = derive_rng(25, 0);
  for (Backend kind : {Backend::analytic, Backend::statevector}) {
    auto backend = make_backend(kind, p, env, 3);
    EXPECT_NEAR(backend->q(), 0.25, 1e-15);
    for (int i = 0; i < 200; ++i) {
      const auto out = backend->run(1, rng);
      EXPECT_TRUE(out.rewarded);
      EXPECT_EQ(out.epochs_consumed, 4u);
      EXPECT_EQ(out.measured, env.correct_path());
      EXPECT_EQ(out.reward(), 1.0);
    }
    EXPECT_EQ(backend->run(0, rng).epochs_consumed, 1u);
  }
  EXPECT_EQ(epochs_for(5, 2), 11u);
  EXPECT_EQ(parse_backend("statevector"), Backend::statevector);
  EXPECT_EQ(backend_name(Backend::analytic), "analytic");
  EXPECT_THROW(parse_backend("qpu"), ContractViolation);
}

TEST(Backends, AnalyticWithoutIterationsIsClassicalSampling) {
  const auto env = BinaryTreeEnv::with_seeded_path(4, 2, 5);
  HValueTreePolicy p(4, 0.4);
  Rng rng = derive_rng(26, 0);
  for (int i = 0; i < 6; ++i) {
    const auto a = env.space().sequence_at(rewarded_indices(env)[i % 4]);
    update_on_reward(p, a, env.evaluate(a));
  }
  const auto probs = enumerate_probabilities(p);
  std::vector<std::uint64_t> counts(16);
  for (int i = 0; i < 200'000; ++i) ++counts[analytic_grover_sample(p, env, 0, rng).sequence];
  EXPECT_GE(stats::chi_square_goodness_of_fit(counts, probs).p_value, stats::kTestAlpha);
}

TEST(Backends, AnalyticMatchesStatevectorDistribution) {
  Rng rng = derive_rng(27, 0);
  const auto env = BinaryTreeEnv::with_seeded_path(6, 2, 8);
  const auto p = random_policy(6, 0.1, rng);
  for (std::uint64_t k : {1u, 2u, 3u}) {
    auto sv = statevector_prepare(p, env);
    for (std::uint64_t i = 0; i < k; ++i) grover_iterate(sv);
    std::vector<double> expected(64);
    for (std::size_t i = 0; i < 64; ++i) expected[i] = sv.probability(i);
    AnalyticBackend analytic(p, env, 2);
    std::vector<std::uint64_t> counts(64);
    for (int i = 0; i < 200'000; ++i) ++counts[analytic.run(k, rng).sequence];
    EXPECT_GE(stats::chi_square_goodness_of_fit(counts, expected).p_value, stats::kTestAlpha) << "k=" << k;
  }
}

TEST(SearchParams, Validation) {
  SearchParams p;
  EXPECT_NO_THROW(p.validate());
  p.lambda = 1.0;
  EXPECT_THROW(p.validate(), ContractViolation);
  p.lambda = 4.0 / 3.0;
  EXPECT_THROW(p.validate(), ContractViolation);
  p.lambda = 1.2;
  p.alpha_o = 0;
  EXPECT_THROW(p.validate(), ContractViolation);
}

TEST(Search, AllRewardedTerminatesAtOnce) {
  const auto env = BinaryTreeEnv::with_seeded_path(5, 5, 1);
  const HValueTreePolicy p(5, 0.1);
  Rng rng = derive_rng(28, 0);
  for (int i = 0; i < 100; ++i) {
    const auto r = exponential_search(p, env, SearchParams{}, 1.0, rng);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.total_epochs, 1u);
    EXPECT_EQ(r.attempts, 1u);
    EXPECT_EQ(r.found->iterations_k, 0u);
  }
}

TEST(Search, EpochAccountingAndSchedule) {
  const auto env = BinaryTreeEnv::with_seeded_path(12, 5, 1);
  const HValueTreePolicy p(12, 0.1);
  SearchParams params;
  params.alpha_o = 3;
  Rng rng = derive_rng(29, 0);
  for (int run = 0; run < 200; ++run) {
    auto backend = make_backend(Backend::analytic, p, env, params.alpha_o);
    std::vector<std::uint64_t> ks;
    std::uint64_t epochs = 0;
    const auto r = exponential_search(*backend, params, q_min_bound(p), rng, [&](const GroverOutcome& o) {
      ks.push_back(o.iterations_k);
      epochs += o.epochs_consumed;
      EXPECT_EQ(o.epochs_consumed, 3 * o.iterations_k + 1);
    });
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.total_epochs, epochs);
    EXPECT_EQ(r.attempts, ks.size());
    EXPECT_EQ(ks.front(), 0u);  // m = 1 forces k = 0
    // k < ceil(m) with m = min(1.2^i, 64) before attempt i
    double m = 1.0;
    for (std::uint64_t k : ks) {
      EXPECT_LT(k, std::ceil(m));
      m = std::min(1.2 * m, 64.0);
    }
  }
}

TEST(Search, CapAndBudget) {
  const auto env = BinaryTreeEnv::with_seeded_path(12, 5, 1);
  const HValueTreePolicy p(12, 0.1);
  Rng rng = derive_rng(30, 0);

  SearchParams capped;
  capped.k_max = 2;
  auto backend = make_backend(Backend::analytic, p, env, 2);
  for (int run = 0; run < 50; ++run) {
    exponential_search(*backend, capped, q_min_bound(p), rng,
                       [](const GroverOutcome& o) { EXPECT_LE(o.iterations_k, 2u); });
  }

  SearchParams classical_only;
  classical_only.k_max = 0;
  exponential_search(*backend, classical_only, q_min_bound(p), rng,
                     [](const GroverOutcome& o) { EXPECT_EQ(o.iterations_k, 0u); });

  SearchParams budget;
  budget.attempt_budget = 1;
  const auto hard = BinaryTreeEnv::with_seeded_path(12, 0, 1);
  std::uint64_t exhausted = 0;
  for (int run = 0; run < 100; ++run) {
    const auto r = exponential_search(p, hard, budget, q_min_bound(p), rng);
    EXPECT_EQ(r.attempts, 1u);
    if (!r.found) {
      ++exhausted;
      EXPECT_TRUE(r.budget_exhausted);
      EXPECT_EQ(r.total_epochs, 1u);
    }
  }
  EXPECT_GT(exhausted, 90u);

  auto hard_backend = make_backend(Backend::analytic, p, hard, 2);
  const auto limited = exponential_search(*hard_backend, SearchParams{}, q_min_bound(p), rng, {}, 50);
  if (limited.found) {
    EXPECT_LE(limited.total_epochs, 50u);
  } else {
    EXPECT_EQ(limited.total_epochs, 50u);
    EXPECT_LE(limited.truncated_epochs, 50u);
  }
}

TEST(Search, BackendsAgreeOnFirstRewardAndCost) {
  const auto env = BinaryTreeEnv::with_seeded_path(5, 1, 4);
  const HValueTreePolicy p(5, 0.1);
  Rng ra = derive_rng(31, 0);
  Rng rs = derive_rng(31, 1);
  // (rewarded leaf, capped epoch count) cells
  auto cell = [&](const SearchResult& r) {
    return (r.found->sequence & 1) * 40 + std::min<std::uint64_t>(r.total_epochs, 39);
  };
  std::vector<std::uint64_t> a(80), s(80);
  for (int i = 0; i < 40'000; ++i) {
    ++a[cell(exponential_search(p, env, SearchParams{}, q_min_bound(p), ra, Backend::analytic))];
    ++s[cell(exponential_search(p, env, SearchParams{}, q_min_bound(p), rs, Backend::statevector))];
  }
  EXPECT_GE(stats::chi_square_homogeneity(a, s).p_value, stats::kTestAlpha);
}

TEST(Turnover, MarginSign) {
  EXPECT_GT(turnover_margin(0.35, 1, 1), 0.0);
  EXPECT_LT(turnover_margin(0.45, 1, 1), 0.0);
  EXPECT_NEAR(turnover_margin(0.25, 3, 1), 0.0, 1e-15);
}

}  // namespace
}  // namespace qrl::amplify
