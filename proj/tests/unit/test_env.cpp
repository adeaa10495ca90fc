#include <gtest/gtest.h>

#include <cmath>

#include "qrl/env/binary_tree.hpp"
#include "qrl/env/reward_table.hpp"
#include "qrl/errors.hpp"
#include "qrl/rng.hpp"

namespace qrl {
namespace {

ActionSequence bits(std::string_view s) { return from_bitstring(s); }

// Reward straight from the tree's definition: count agreeing decisions, then
// floor(2^(k + x - l)).
double reward_oracle(const ActionSequence& correct, const ActionSequence& a, int k) {
  const int l = static_cast<int>(correct.size());
  int x = 0;
  while (x < l && a[x] == correct[x]) ++x;
  return std::floor(std::ldexp(1.0, k + x - l));
}

TEST(SequenceSpace, BinaryIndexIsTheBitString) {
  const auto s = SequenceSpace::binary(4);
  EXPECT_EQ(s.size(), 16u);
  EXPECT_EQ(s.index_of(bits("1010")), 10u);
  EXPECT_EQ(to_bitstring(s.sequence_at(6)), "0110");
  for (std::uint64_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.index_of(s.sequence_at(i)), i);
}

TEST(SequenceSpace, MixedRadixRoundTrip) {
  const SequenceSpace s({3, 2, 4});
  EXPECT_EQ(s.size(), 24u);
  EXPECT_FALSE(s.is_binary());
  EXPECT_EQ(s.max_arity(), 4u);
  for (std::uint64_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.index_of(s.sequence_at(i)), i);
  EXPECT_EQ(s.index_of(ActionSequence({2, 1, 3})), 23u);
}

TEST(SequenceSpace, PrefixIdsFollowNodeNumbering) {
  const auto s = SequenceSpace::binary(3);
  const std::vector<std::uint32_t> empty;
  EXPECT_EQ(s.prefix_id(empty), 1u);
  const std::vector<std::uint32_t> p{1, 0};
  EXPECT_EQ(s.prefix_id(p), 0b110u);
}

TEST(SequenceSpace, RejectsWrongShape) {
  const auto s = SequenceSpace::binary(3);
  EXPECT_THROW(s.validate(bits("01")), ContractViolation);
  EXPECT_THROW(s.validate(ActionSequence({0, 2, 0})), ContractViolation);
  EXPECT_NO_THROW(s.validate(bits("011")));
}

TEST(BinaryTree, RewardExamples) {
  const auto path = bits("011010011101");
  const BinaryTreeEnv env(12, 5, path);
  EXPECT_EQ(env.evaluate(path).reward, 32.0);

  auto at8 = path;  // leaves the path at decision 8, after 7 correct ones
  at8.steps[7] ^= 1;
  EXPECT_EQ(env.evaluate(at8).reward, 1.0);

  auto at1 = path;
  at1.steps[0] ^= 1;
  EXPECT_EQ(env.evaluate(at1).reward, 0.0);
}

TEST(BinaryTree, RewardsMatchDefinitionOnEveryLeaf) {
  for (std::size_t k = 0; k <= 6; ++k) {
    const auto env = BinaryTreeEnv::with_seeded_path(6, k, 11 + k);
    const auto& space = env.space();
    for (std::uint64_t i = 0; i < space.size(); ++i) {
      const auto a = space.sequence_at(i);
      const double r = env.evaluate(a).reward;
      EXPECT_EQ(r, reward_oracle(env.correct_path(), a, static_cast<int>(k)));
      EXPECT_EQ(env.reward(a), r);
      if (!(a == env.correct_path())) EXPECT_LT(r, std::ldexp(1.0, static_cast<int>(k)));
    }
  }
}

TEST(BinaryTree, PerceptsAreVisitedNodeIds) {
  const BinaryTreeEnv env(3, 1, bits("010"));
  const auto out = env.evaluate(bits("011"));
  ASSERT_EQ(out.percepts.size(), 3u);
  EXPECT_EQ(out.percepts[0], 0b10u);
  EXPECT_EQ(out.percepts[1], 0b101u);
  EXPECT_EQ(out.percepts[2], 0b1011u);
}

TEST(BinaryTree, EvaluateIsDeterministic) {
  const auto env = BinaryTreeEnv::with_seeded_path(12, 5, 3);
  Rng rng = derive_rng(1, 0);
  for (int i = 0; i < 200; ++i) {
    ActionSequence a;
    for (int s = 0; s < 12; ++s) a.steps.push_back(static_cast<std::uint32_t>(rng() & 1));
    EXPECT_EQ(env.evaluate(a), env.evaluate(a));
  }
}

TEST(BinaryTree, RejectsBadInput) {
  const BinaryTreeEnv env(3, 1, bits("010"));
  EXPECT_THROW(env.evaluate(bits("01")), ContractViolation);
  EXPECT_THROW(env.evaluate(ActionSequence({0, 1, 2})), ContractViolation);
  EXPECT_THROW(BinaryTreeEnv(3, 4, bits("010")), ContractViolation);
  EXPECT_THROW(BinaryTreeEnv(3, 1, bits("01")), ContractViolation);
}

TEST(CountRewarded, Examples) {
  EXPECT_EQ(count_rewarded(BinaryTreeEnv::with_seeded_path(12, 5, 1)), 32u);
  EXPECT_EQ(count_rewarded(BinaryTreeEnv::with_seeded_path(3, 0, 1)), 1u);
  EXPECT_EQ(count_rewarded(BinaryTreeEnv::with_seeded_path(7, 7, 1)), 128u);
}

TEST(CountRewarded, PowerOfTwoForEveryTreeUpToSixteenLayers) {
  for (std::size_t l = 1; l <= 16; ++l) {
    for (std::size_t k : {std::size_t{0}, l / 2, l}) {
      const auto env = BinaryTreeEnv::with_seeded_path(l, k, 100 * l + k);
      ASSERT_EQ(count_rewarded(env), std::uint64_t{1} << k) << "l=" << l << " k=" << k;
      EXPECT_EQ(rewarded_indices(env).size(), std::uint64_t{1} << k);
    }
  }
}

TEST(CountRewarded, RefusesLargeSpaces) {
  const auto env = BinaryTreeEnv::with_seeded_path(12, 5, 1);
  EXPECT_THROW(count_rewarded(env, 1000), NotEnumerable);
}

TEST(CountRewarded, PrunedIndicesMatchFullScan) {
  const auto env = BinaryTreeEnv::with_seeded_path(10, 4, 9);
  std::vector<std::uint64_t> scan;
  for (std::uint64_t i = 0; i < env.space().size(); ++i) {
    if (env.reward(env.space().sequence_at(i)) > 0) scan.push_back(i);
  }
  EXPECT_EQ(rewarded_indices(env), scan);
}

TEST(RewardTable, ParsesAndEvaluates) {
  const auto env = parse_reward_table("# two rewarded leaves\n011,2\n\n110,0.5\n");
  EXPECT_EQ(env.epoch_length(), 3u);
  EXPECT_EQ(env.evaluate(bits("011")).reward, 2.0);
  EXPECT_EQ(env.evaluate(bits("110")).reward, 0.5);
  EXPECT_EQ(env.evaluate(bits("000")).reward, 0.0);
  EXPECT_EQ(count_rewarded(env), 2u);
  EXPECT_TRUE(env.may_reward(std::vector<std::uint32_t>{1}));
  EXPECT_FALSE(env.may_reward(std::vector<std::uint32_t>{1, 0}));
}

TEST(RewardTable, RejectsMalformedTables) {
  EXPECT_THROW(parse_reward_table(""), ContractViolation);
  EXPECT_THROW(parse_reward_table("01,1\n011,1\n"), ContractViolation);
  EXPECT_THROW(parse_reward_table("011,0\n"), ContractViolation);
  EXPECT_THROW(parse_reward_table("012,1\n"), ContractViolation);
}

}  // namespace
}  // namespace qrl
