#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qrl/agents/agents.hpp"
#include "qrl/env/binary_tree.hpp"
#include "qrl/env/reward_table.hpp"
#include "qrl/errors.hpp"
#include "qrl/policy/hvalue_tree.hpp"
#include "qrl/stats/bounds.hpp"
#include "qrl/stats/curve.hpp"
#include "qrl/stats/distribution.hpp"
#include "qrl/stats/hypothesis.hpp"
#include "qrl/stats/kahan.hpp"
#include "qrl/stats/summary.hpp"
#include "qrl/stats/thresholds.hpp"
#include "qrl/verify/oracles.hpp"

namespace qrl::stats {
namespace {

using agents::AgentTrace;

agents::StopRule rewards(std::uint64_t j) {
  agents::StopRule s;
  s.rewards = j;
  return s;
}

agents::StopRule horizon(std::uint64_t h) {
  agents::StopRule s;
  s.epoch_budget = h;
  return s;
}

// A trace with rewards at the given epochs and Q after each.
AgentTrace synthetic(double q0, std::vector<std::pair<std::uint64_t, double>> rewards, std::uint64_t total) {
  AgentTrace t;
  t.q_initial = q0;
  t.total_epochs = total;
  double q = q0;
  for (auto [epoch, q_after] : rewards) {
    t.rewards.push_back({epoch, epoch, q, q_after});
    t.history.append(0, 1.0);
    q = q_after;
  }
  return t;
}

TEST(LearningTime, Examples) {
  const auto already = learning_time(synthetic(0.5, {{3, 0.6}}, 10), 0.4);
  EXPECT_EQ(already.T, 0u);
  EXPECT_EQ(already.J, 0u);
  EXPECT_FALSE(already.censored);

  const auto reached = learning_time(synthetic(0.1, {{4, 0.2}, {9, 0.5}, {12, 0.7}}, 12), 0.5);
  EXPECT_EQ(reached.T, 9u);
  EXPECT_EQ(reached.J, 2u);

  const auto never = learning_time(synthetic(0.1, {{4, 0.2}}, 40), 0.5);
  EXPECT_TRUE(never.censored);
  EXPECT_EQ(never.T, 40u);
  EXPECT_EQ(never.J, 1u);
}

TEST(LearningTime, OneUpdateLearnsEverything) {
  // One decision, one rewarded leaf; beta so large that a single reward makes
  // the rewarded choice certain.
  const auto env = BinaryTreeEnv::with_seeded_path(1, 0, 1);
  Rng rng = derive_rng(60, 0);
  for (int i = 0; i < 20; ++i) {
    HValueTreePolicy p(1, 1000.0);
    const auto t = agents::run_classical(p, env, rewards(1), rng);
    EXPECT_EQ(t.q_final(), 1.0);
    const auto lt = learning_time(t, 1.0);
    EXPECT_EQ(lt.T, t.rewards[0].epoch);
    EXPECT_EQ(lt.J, 1u);
  }
}

TEST(Summary, MomentsAndCensoring) {
  const std::vector<LearningTime> times = {{10, 2, false}, {20, 4, false}, {30, 3, false}, {50, 1, true}};
  const auto s = summarize(times, 0.3);
  EXPECT_EQ(s.n, 3u);
  EXPECT_EQ(s.censored_count, 1u);
  EXPECT_DOUBLE_EQ(s.mean_T, 20.0);
  EXPECT_DOUBLE_EQ(s.std_T, 10.0);
  EXPECT_DOUBLE_EQ(s.mean_J, 3.0);
  EXPECT_DOUBLE_EQ(s.std_J, 1.0);
  EXPECT_DOUBLE_EQ(s.cov_TJ, 5.0);  // ((-10)(-1) + 0 + 10 * 0) / 2
  EXPECT_DOUBLE_EQ(s.mean_T_with_censored, 27.5);
  EXPECT_DOUBLE_EQ(s.stderr_T(), 10.0 / std::sqrt(3.0));
}

TEST(Summary, LearningNeedsAtLeastOneEpochPerReward) {
  const auto env = BinaryTreeEnv::with_seeded_path(12, 5, 1);
  Rng rng = derive_rng(61, 0);
  std::vector<AgentTrace> classical, hybrid;
  agents::StopRule stop;
  stop.q_learned = 0.3;
  for (int i = 0; i < 300; ++i) {
    HValueTreePolicy a(12, 0.1), b(12, 0.1);
    classical.push_back(agents::run_classical(a, env, stop, rng, false));
    hybrid.push_back(agents::run_hybrid(b, env, {}, agents::AlwaysQuantum{}, stop, rng));
  }
  for (const auto* ts : {&classical, &hybrid}) {
    const auto s = summarize_learning(*ts, 0.3);
    EXPECT_EQ(s.n, 300u);
    EXPECT_GE(s.mean_T, s.mean_J);
    EXPECT_GT(s.mean_J, 0.0);
  }
}

TEST(Decomposition, ResidualIsZeroOnAverage) {
  const auto env = BinaryTreeEnv::with_seeded_path(12, 5, 1);
  Rng rng = derive_rng(62, 0);
  std::vector<AgentTrace> traces;
  agents::StopRule stop;
  stop.q_learned = 0.3;
  for (int i = 0; i < 2000; ++i) {
    HValueTreePolicy p(12, 0.1);
    traces.push_back(agents::run_classical(p, env, stop, rng, false));
  }
  const auto d = interval_decomposition(traces, 0.3);
  EXPECT_EQ(d.n, 2000u);
  EXPECT_NEAR(d.mean_residual, 0.0, kMeanSigmas * d.stderr_residual);
  EXPECT_NEAR(d.mean_T - d.mean_predicted, d.mean_residual, 1e-9);
}

TEST(ExactHistories, Examples) {
  const HValueTreePolicy one_step(1, 0.1);
  const auto single = parse_reward_table("1,1\n");
  const auto d1 = exact_history_distribution(one_step, single, 1);
  ASSERT_EQ(d1.probabilities.size(), 1u);
  EXPECT_DOUBLE_EQ(d1.probability({1}), 1.0);

  const auto tree = BinaryTreeEnv::with_seeded_path(3, 1, 1);
  const HValueTreePolicy fresh(3, 0.1);
  const auto d = exact_history_distribution(fresh, tree, 1);
  ASSERT_EQ(d.probabilities.size(), 2u);
  for (const auto& [key, p] : d.probabilities) EXPECT_DOUBLE_EQ(p, 0.5);

  const auto d2 = exact_history_distribution(fresh, tree, 2);
  EXPECT_EQ(d2.probabilities.size(), 4u);
  EXPECT_NEAR(d2.total(), 1.0, 1e-10);
  const auto oracle = verify::epoch_level_history_distribution(fresh, tree, 2);
  EXPECT_EQ(oracle.probabilities.size(), 4u);
  for (const auto& [key, p] : d2.probabilities) EXPECT_NEAR(p, oracle.probability(key), 1e-10);
}

TEST(ExactHistories, NormalizedOnLargerCases) {
  const auto tree = BinaryTreeEnv::with_seeded_path(5, 2, 3);
  const HValueTreePolicy p(5, 0.3);
  for (std::size_t j = 1; j <= 4; ++j) EXPECT_NEAR(exact_history_distribution(p, tree, j).total(), 1.0, 1e-10);
  EXPECT_THROW(exact_history_distribution(p, tree, 4, 100), LimitExceeded);
}

TEST(EmpiricalHistories, CountsAndRefusals) {
  const auto tree = BinaryTreeEnv::with_seeded_path(3, 1, 1);
  Rng rng = derive_rng(63, 0);
  std::vector<AgentTrace> traces;
  for (int i = 0; i < 200; ++i) {
    HValueTreePolicy p(3, 0.1);
    traces.push_back(agents::run_classical(p, tree, rewards(2), rng, false));
  }
  const auto e = empirical_history_distribution(traces, 2);
  EXPECT_EQ(e.n, 200u);
  std::uint64_t sum = 0;
  for (const auto& [k, c] : e.counts) sum += c;
  EXPECT_EQ(sum, 200u);
  EXPECT_NEAR(e.frequencies().total(), 1.0, 1e-12);
  EXPECT_THROW(empirical_history_distribution(traces, 3), ContractViolation);
  EXPECT_THROW(empirical_history_distribution(std::span<const AgentTrace>{}, 1), ContractViolation);
}

TEST(Distances, TotalVariationAndNoiseScale) {
  HistoryDistribution p{1, {{{1}, 0.5}, {{2}, 0.5}}};
  HistoryDistribution q{1, {{{1}, 0.2}, {{3}, 0.8}}};
  EXPECT_DOUBLE_EQ(tv_distance(p, q), 0.8);
  EXPECT_DOUBLE_EQ(tv_distance(p, p), 0.0);
  EXPECT_DOUBLE_EQ(multinomial_tv_bound(p, 100, 4.0), 0.5 * 4.0 * 2 * std::sqrt(0.25 / 100));
  EXPECT_DOUBLE_EQ(two_sample_tv_bound(p, 100, 100, 4.0), 0.5 * 4.0 * 2 * std::sqrt(0.25 * (0.01 + 0.01)));
}

TEST(ChiSquare, MatchesReferenceValues) {
  const std::vector<std::uint64_t> obs{10, 20, 30};
  const std::vector<double> uniform(3, 1.0 / 3.0);
  const auto r = chi_square_goodness_of_fit(obs, uniform);
  EXPECT_NEAR(r.statistic, 10.0, 1e-12);
  EXPECT_EQ(r.dof, 2.0);
  EXPECT_NEAR(r.p_value, 0.006737946999085468, 1e-12);
  EXPECT_TRUE(r.rejects(kTestAlpha));

  const std::vector<std::uint64_t> obs2{50, 30, 20};
  const std::vector<double> p2{0.4, 0.4, 0.2};
  EXPECT_NEAR(chi_square_goodness_of_fit(obs2, p2).p_value, 0.0820849986238988, 1e-12);

  const std::vector<std::uint64_t> a{30, 20, 50}, b{20, 30, 50};
  const auto h = chi_square_homogeneity(a, b);
  EXPECT_NEAR(h.statistic, 4.0, 1e-12);
  EXPECT_EQ(h.dof, 2.0);
  EXPECT_NEAR(h.p_value, 0.1353352832366127, 1e-12);
}

TEST(ChiSquare, PoolsSparseCells) {
  const std::vector<std::uint64_t> obs{500, 499, 1, 0};
  const std::vector<double> p{0.5, 0.498, 0.001, 0.001};
  const auto r = chi_square_goodness_of_fit(obs, p);
  EXPECT_EQ(r.dof, 2.0);  // two big cells plus one pooled cell
}

TEST(Kolmogorov, MatchesReferenceValues) {
  EXPECT_NEAR(kolmogorov_survival(0.5), 0.9639452436648751, 1e-10);
  EXPECT_NEAR(kolmogorov_survival(1.0), 0.26999967167735456, 1e-12);
  EXPECT_NEAR(kolmogorov_survival(1.36), 0.049485876755377876, 1e-12);
  EXPECT_NEAR(kolmogorov_survival(2.0), 0.0006709252557796953, 1e-12);
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(KS, AcceptsTheTrueLawAndRejectsAWrongOne) {
  Rng rng = derive_rng(64, 0);
  std::vector<double> u(5000);
  for (auto& x : u) x = uniform01(rng);
  EXPECT_FALSE(ks_test(u, [](double x) { return std::clamp(x, 0.0, 1.0); }).rejects(kTestAlpha));
  EXPECT_TRUE(ks_test(u, [](double x) { return std::clamp(x * x, 0.0, 1.0); }).rejects(kTestAlpha));

  std::geometric_distribution<std::uint64_t> geo(0.1);
  std::vector<std::uint64_t> g(5000);
  for (auto& x : g) x = geo(rng) + 1;
  EXPECT_FALSE(ks_test_discrete(g, [](std::uint64_t t) { return geometric_cdf(t, 0.1); }).rejects(kTestAlpha));
  EXPECT_TRUE(ks_test_discrete(g, [](std::uint64_t t) { return geometric_cdf(t, 0.13); }).rejects(kTestAlpha));
}

TEST(Geometric, CdfAndPit) {
  EXPECT_DOUBLE_EQ(geometric_cdf(0, 0.3), 0.0);
  EXPECT_NEAR(geometric_cdf(1, 0.3), 0.3, 1e-15);
  EXPECT_NEAR(geometric_cdf(3, 0.3), 1 - 0.7 * 0.7 * 0.7, 1e-15);
  EXPECT_NEAR(geometric_cdf(1000, 1e-9), 1000e-9, 1e-12);

  Rng rng = derive_rng(65, 0);
  std::vector<double> pit;
  for (int i = 0; i < 6000; ++i) {
    const double q = 0.02 + 0.5 * uniform01(rng);
    std::geometric_distribution<std::uint64_t> geo(q);
    pit.push_back(geometric_pit(geo(rng) + 1, q, rng));
  }
  EXPECT_FALSE(ks_test(pit, [](double x) { return std::clamp(x, 0.0, 1.0); }).rejects(kTestAlpha));
}

TEST(Checks, FormatAndMargins) {
  const auto c = upper_bound_check("demo", 9.0, 1.0, 10.0, 0.0, 3.0);
  EXPECT_TRUE(c.pass);
  EXPECT_DOUBLE_EQ(c.sigma_margin, 1.0);
  EXPECT_EQ(format_check(c), "check=demo measured=9 bound=10 sigma_margin=1 verdict=PASS");

  const auto over = upper_bound_check("over", 12.0, 0.3, 10.0, 0.4, 3.0);
  EXPECT_FALSE(over.pass);
  EXPECT_DOUBLE_EQ(over.sigma_margin, -4.0);

  const auto eq = equality_check("eq", 1.0, 0.1, 1.2, 0.0, 2.0);
  EXPECT_TRUE(eq.pass);
  EXPECT_NEAR(eq.sigma_margin, 0.0, 1e-12);
  EXPECT_FALSE(equality_check("ne", 1.0, 0.1, 1.3, 0.0, 2.0).pass);
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-300), "1e-300");
}

TEST(Theorem2, DegenerateThresholdIsTriviallyMet) {
  const std::vector<LearningTime> zero(10, LearningTime{0, 0, false});
  const auto s = summarize(zero, 0.001);
  const auto c = theorem2_bound_check(s, s, 2.25, 1);
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.measured, 0.0);
  EXPECT_EQ(c.bound, 0.0);
}

TEST(Theorem2, BoundValueAndRefusals) {
  const std::vector<LearningTime> ct = {{100, 4, false}, {300, 4, false}};
  const std::vector<LearningTime> qt = {{40, 4, false}, {60, 4, false}};
  const auto c = theorem2_bound_check(summarize(ct, 0.3), summarize(qt, 0.3), 2.25, 2);
  EXPECT_DOUBLE_EQ(c.bound, 4.5 * std::sqrt(200.0 * 4.0));
  EXPECT_TRUE(c.pass);
  EXPECT_THROW(theorem2_bound_check(summarize(ct, 0.3), summarize(qt, 0.4), 2.25, 2), ContractViolation);
}

TEST(Theorem3, RefusesOutsideItsDomain) {
  const std::vector<LearningTime> t = {{100, 4, false}, {120, 4, false}};
  const auto s = summarize(t, 0.1);
  EXPECT_THROW(theorem3_bound_check(s, s, 1, 0, 0.1), ContractViolation);
  EXPECT_THROW(theorem3_bound_check(s, s, 1, 2, 0.1), ContractViolation);  // q_kmax(2) = 0.0955
  const auto high = summarize(t, 0.3);
  EXPECT_THROW(theorem3_bound_check(high, high, 1, 1, 0.3), ContractViolation);  // q_kmax(1) = 0.25
  const auto low = summarize(t, 0.05);
  const auto r =
      theorem3_bound_check(low, summarize(std::vector<LearningTime>{{30, 4, false}, {40, 4, false}}, 0.05), 1, 2, 0.05);
  EXPECT_DOUBLE_EQ(r.bound.bound, std::numbers::pi * std::numbers::pi / 32.0 * 110.0);
  EXPECT_DOUBLE_EQ(r.ratio, 35.0 / 110.0);
  EXPECT_DOUBLE_EQ(r.refinement, 110.0 / 8.0);
}

TEST(Curve, SingleAgentConstantReward) {
  const auto env = parse_reward_table("000,8\n001,8\n010,8\n011,8\n100,8\n101,8\n110,8\n111,8\n");
  HValueTreePolicy p(3, 0.1);
  Rng rng = derive_rng(66, 0);
  const std::vector<AgentTrace> traces = {agents::run_classical(p, env, horizon(3), rng)};
  const auto c = average_reward_curve(traces, 3);
  ASSERT_EQ(c.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(c[i].epoch, i + 1);
    EXPECT_EQ(c[i].mean_reward, 8.0);
    EXPECT_EQ(c[i].stderr, 0.0);
    EXPECT_EQ(c[i].n_alive, 1u);
  }
}

TEST(Curve, FirstEpochIsTheExpectedReward) {
  const auto env = BinaryTreeEnv::with_seeded_path(12, 5, 1);
  const HValueTreePolicy fresh(12, 0.1);
  // 32 on the path, plus 2^(11-x) leaves paying 2^(x-7) for x = 7..11
  const double expected = 112.0 / 4096.0;
  EXPECT_NEAR(verify::expected_reward(fresh, env), expected, 1e-15);

  Rng rng = derive_rng(67, 0);
  CurveAccumulator acc(1);
  for (int i = 0; i < 40'000; ++i) {
    HValueTreePolicy p(12, 0.1);
    acc.add(agents::run_classical(p, env, horizon(1), rng, true));
  }
  const auto c = acc.curve();
  EXPECT_NEAR(c[0].mean_reward, expected, kMeanSigmas * c[0].stderr);
}

TEST(Curve, MergeEqualsSinglePassAndAccountingDropsAmplification) {
  const auto env = BinaryTreeEnv::with_seeded_path(8, 3, 2);
  Rng rng = derive_rng(68, 0);
  std::vector<AgentTrace> traces;
  for (int i = 0; i < 64; ++i) {
    HValueTreePolicy p(8, 0.1);
    traces.push_back(agents::run_hybrid(p, env, {}, agents::QThreshold{0.3}, horizon(200), rng));
  }
  const auto whole = average_reward_curve(traces, 200);
  CurveAccumulator a(200), b(200);
  for (int i = 0; i < 64; ++i) (i < 32 ? a : b).add(traces[i]);
  a.merge(b);
  const auto merged = a.curve();
  for (std::size_t e = 0; e < 200; ++e) {
    EXPECT_DOUBLE_EQ(merged[e].mean_reward, whole[e].mean_reward);
    EXPECT_EQ(merged[e].n_alive, whole[e].n_alive);
  }

  // On the unamplified axis each agent's reward sequence is its
  // classical/verification epochs in order.
  const auto& t = traces[0];
  std::vector<double> unamp;
  for (const auto& span : t.records) {
    if (span.kind == agents::EpochKind::quantum) continue;
    for (std::uint64_t i = 0; i < span.count; ++i) unamp.push_back(span.reward);
  }
  const std::vector<AgentTrace> one = {t};
  const auto u = average_reward_curve(one, 200, CurveAccounting::unamplified_only);
  for (std::size_t e = 0; e < std::min<std::size_t>(200, unamp.size()); ++e) EXPECT_EQ(u[e].mean_reward, unamp[e]);
  if (unamp.size() < 200) EXPECT_EQ(u[unamp.size()].n_alive, 0u);

  double sum = 0.0;
  for (std::size_t e = 0; e < 50; ++e) sum += unamp[e];
  EXPECT_DOUBLE_EQ(trace_window_mean(t, 1, 50, CurveAccounting::unamplified_only), sum / 50);
  EXPECT_DOUBLE_EQ(curve_window_mean(u, 1, 50), sum / 50);
  EXPECT_EQ(parse_curve_accounting("unamplified_only"), CurveAccounting::unamplified_only);
  EXPECT_EQ(curve_accounting_name(CurveAccounting::all_epochs), "all_epochs");
}

TEST(Kahan, CompensatesCancellation) {
  KahanSum s;
  s += 1.0;
  s += 1e100;
  s += 1.0;
  s += -1e100;
  EXPECT_EQ(s.value(), 2.0);
}

}  // namespace
}  // namespace qrl::stats
