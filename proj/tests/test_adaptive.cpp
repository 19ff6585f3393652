#include <gtest/gtest.h>

#include "sbfe/adaptive.hpp"
#include "sbfe/oracle.hpp"
#include "test_support.hpp"

using namespace sbfe;

TEST(RatioPrefixChoice, EqualProbabilitiesPickSmallest) {
  const Instance inst(3, std::vector<double>(5, 0.4));
  EXPECT_EQ(adaptive::ratio_prefix_choice(inst, {{1, 3, 4}, 1, 1}), 1);
  EXPECT_EQ(adaptive::ratio_prefix_choice(inst, {{0, 1, 2, 3, 4}, 0, 0}), 0);
}

TEST(RatioPrefixChoice, TwoVariables) {
  const Instance inst(1, {0.2, 0.8});
  EXPECT_EQ(adaptive::ratio_prefix_choice(inst, {{0, 1}, 0, 0}), 1);
}

TEST(RatioPrefixChoice, FreeVariableBoundsChoice) {
  testkit::Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testkit::uniform_int(rng, 2, 10);
    auto base = testkit::random_instance(rng, n);
    std::vector<Cost> c(base.costs().begin(), base.costs().end());
    const Index pivot = testkit::uniform_int(rng, 0, n - 1);
    for (auto& ci : c) ci = testkit::uniform_int(rng, 1, 4);
    c[static_cast<std::size_t>(pivot)] = 0;
    const Instance inst(base.k(), {base.probabilities().begin(), base.probabilities().end()}, c);
    adaptive::AdaptiveState st;
    for (Index i = 0; i < n; ++i) st.remaining.push_back(i);
    const Index chosen = adaptive::ratio_prefix_choice(inst, st);
    // The free variable sits in both prefixes, so nothing after it is chosen.
    EXPECT_LE(chosen, pivot);
    if (pivot == 0) EXPECT_EQ(chosen, 0);
  }
}

TEST(RatioPrefixChoice, InvariantUnderCostScaling) {
  testkit::Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testkit::uniform_int(rng, 1, 10);
    const auto inst = testkit::random_instance(rng, n, testkit::CostKind::small_int);
    std::vector<Cost> scaled(inst.costs().begin(), inst.costs().end());
    for (auto& ci : scaled) ci *= 7;
    const Instance big(inst.k(), {inst.probabilities().begin(), inst.probabilities().end()}, scaled);
    adaptive::AdaptiveState st;
    for (Index i = 0; i < n; ++i) st.remaining.push_back(i);
    EXPECT_EQ(adaptive::ratio_prefix_choice(inst, st), adaptive::ratio_prefix_choice(big, st));
  }
}

TEST(RatioPrefixChoice, RejectsInvalidStates) {
  const Instance inst(2, {0.3, 0.5, 0.7});
  EXPECT_THROW(adaptive::ratio_prefix_choice(inst, {{}, 2, 1}), ValidationError);
  EXPECT_THROW(adaptive::ratio_prefix_choice(inst, {{2}, 2, 0}), ValidationError);
  EXPECT_THROW(adaptive::ratio_prefix_choice(inst, {{0, 1}, 0, 0}), ValidationError);
  EXPECT_THROW(adaptive::ratio_prefix_choice(inst, {{0, 1, 5}, 0, 0}), ValidationError);
}

TEST(AdaptiveExpectedCost, Examples) {
  EXPECT_DOUBLE_EQ(adaptive::adaptive_expected_cost(Instance(1, {0.7})), 1.0);
  EXPECT_DOUBLE_EQ(adaptive::adaptive_expected_cost(Instance(1, {0.5, 0.5})), 1.5);
}

TEST(AdaptiveExpectedCost, EqualsOptimum) {
  testkit::Rng rng(43);
  const testkit::CostKind kinds[] = {testkit::CostKind::unit, testkit::CostKind::zero_one, testkit::CostKind::small_int};
  for (int trial = 0; trial < 120; ++trial) {
    const int n = testkit::uniform_int(rng, 1, 10);
    const auto inst = testkit::random_instance(rng, n, kinds[trial % 3]);
    EXPECT_NEAR(adaptive::adaptive_expected_cost(inst), oracle::opt_adaptive_dp(inst), 1e-10);
  }
}

TEST(AdaptiveExpectedCost, MatchesStrategyEnumeration) {
  testkit::Rng rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = testkit::uniform_int(rng, 1, 9);
    const auto inst = testkit::random_instance(rng, n, testkit::CostKind::small_int);
    EXPECT_NEAR(adaptive::adaptive_expected_cost(inst),
                oracle::strategy_expectation_by_enumeration(inst, adaptive::ratio_prefix_strategy()), 1e-12);
  }
}

TEST(AdaptiveExpectedCost, CapEnforced) {
  EXPECT_THROW(adaptive::adaptive_expected_cost(Instance(3, std::vector<double>(21, 0.5))), CapExceeded);
}
