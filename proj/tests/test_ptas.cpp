#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "sbfe/oracle.hpp"
#include "sbfe/ptas.hpp"
#include "test_support.hpp"

using namespace sbfe;
using namespace sbfe::ptas;

namespace {

PartialPolicy P(std::vector<Index> v) { return PartialPolicy(std::move(v)); }

void expect_valid_length(const PartialPolicy& pi, int n, int len) {
  EXPECT_EQ(pi.size(), static_cast<std::size_t>(len));
  EXPECT_TRUE(pi.fits(n));
}

}  // namespace

TEST(InternalEpsilon, Examples) {
  EXPECT_EQ(internal_epsilon(1.0).inverse(), 56);
  EXPECT_EQ(internal_epsilon(0.5).inverse(), 112);
  EXPECT_EQ(internal_epsilon(0.3).inverse(), 187);
  EXPECT_THROW(internal_epsilon(0.0), ValidationError);
  EXPECT_THROW(internal_epsilon(-0.1), ValidationError);
  EXPECT_THROW(internal_epsilon(1.5), ValidationError);
}

TEST(InternalEpsilon, ChainedFactorsStayBelowTarget) {
  for (double target : {1.0, 0.5, 0.25, 0.1, 0.01}) {
    const auto eps = internal_epsilon(target);
    EXPECT_LE(1.0 + bucket_loss(eps), 1.0 + target / 4.0);
    EXPECT_LE(guided_chain_factor(eps), 1.0 + target);
  }
}

TEST(BucketSizePlan, Examples) {
  EXPECT_EQ(bucket_size_plan(10, 20, Epsilon(2)).kind, BoundedCase::full_enumeration);
  EXPECT_EQ(full_enumeration_threshold(Epsilon(2)), 25);
  EXPECT_EQ(bucket_size_plan(24, 30, Epsilon(2)).kind, BoundedCase::full_enumeration);
  const auto plan = bucket_size_plan(30, 40, Epsilon(2));
  EXPECT_EQ(plan.kind, BoundedCase::uniform_tail);
  std::vector<int> expected{14};
  for (int i = 0; i < 11; ++i) expected.push_back(2);
  expected.push_back(4);
  EXPECT_EQ(plan.sizes, expected);
  EXPECT_THROW(bucket_size_plan(5, 5, Epsilon(2)), ValidationError);
}

TEST(BucketSizePlan, Invariants) {
  for (int e = 1; e <= 5; ++e) {
    const Epsilon eps(e);
    const int start = static_cast<int>(full_enumeration_threshold(eps));
    for (int a = start; a < start + 60; ++a) {
      for (int ap = a + 1; ap < a + 200; ap += 7) {
        const auto plan = bucket_size_plan(a, ap, eps);
        ASSERT_NE(plan.kind, BoundedCase::full_enumeration);
        // Without the override the single-tail case never arises.
        EXPECT_EQ(plan.kind, BoundedCase::uniform_tail);
        int sum = 0;
        for (int s : plan.sizes) sum += s;
        EXPECT_EQ(sum, ap);
        EXPECT_EQ(plan.sizes.front(), head_bucket_size(a, eps));
        const int cap = (plan.sizes.front() + e - 1) / e;
        for (std::size_t i = 1; i < plan.sizes.size(); ++i) {
          EXPECT_GE(plan.sizes[i], e);
          EXPECT_LE(plan.sizes[i], 2 * e);
          EXPECT_LE(plan.sizes[i], cap);
        }
      }
    }
  }
}

TEST(BucketSizePlan, OverrideReachesSingleTail) {
  const EnumerationOptions force{kDefaultBudget, true};
  const auto plan = plan_for(BoundedSpec{6, 7, Epsilon(3)}, force);
  EXPECT_EQ(plan.kind, BoundedCase::single_tail);
  EXPECT_EQ(plan.sizes, (std::vector<int>{3, 4}));
  EXPECT_STREQ(case_tag(plan.kind), "2a");
  // Head below 1/eps: the override does not apply.
  EXPECT_EQ(plan_for(BoundedSpec{3, 7, Epsilon(3)}, force).kind, BoundedCase::full_enumeration);
}

TEST(EnumerateBounded, OrderedPairs) {
  const Instance inst(2, {0.1, 0.4, 0.6, 0.9});
  std::set<std::vector<Index>> seen;
  const auto count = enumerate_bounded(inst, BoundedSpec{1, 2, Epsilon(2)}, [&](const PartialPolicy& pi) {
    expect_valid_length(pi, 4, 2);
    seen.insert({pi.begin(), pi.end()});
  });
  EXPECT_EQ(count, 12u);
  EXPECT_EQ(seen.size(), 12u);
}

TEST(EnumerateBounded, ForcedUniformTailHasLengthAPrime) {
  const Instance inst(4, std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
  const BoundedSpec spec{5, 8, Epsilon(2)};
  const EnumerationOptions force{kDefaultBudget, true};
  ASSERT_EQ(plan_for(spec, force).kind, BoundedCase::uniform_tail);
  const auto count = enumerate_bounded(inst, spec, [&](const PartialPolicy& pi) { expect_valid_length(pi, 8, 8); }, force);
  EXPECT_GT(count, 0u);
  EXPECT_LE(static_cast<double>(count), enumeration_estimate(inst, spec, force));
}

TEST(EnumerateBounded, SmallInstancesEmitValidPolicies) {
  const EnumerationOptions force{kDefaultBudget, true};
  for (int n = 2; n <= 7; ++n) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = (i + 1.0) / (n + 1.0);
    const Instance inst(1 + n / 2, p);
    for (int e = 1; e <= 3; ++e) {
      for (int a = 1; a < n; ++a) {
        for (int ap = a + 1; ap <= n; ++ap) {
          const BoundedSpec spec{a, ap, Epsilon(e)};
          for (const auto& opt : {EnumerationOptions{}, force}) {
            const auto count = enumerate_bounded(inst, spec, [&](const PartialPolicy& pi) { expect_valid_length(pi, n, ap); }, opt);
            EXPECT_GT(count, 0u);
            EXPECT_LE(static_cast<double>(count), enumeration_estimate(inst, spec, opt));
          }
        }
      }
    }
  }
}

TEST(EnumerateBounded, ForcedSingleTailCoversTailCombinations) {
  const Instance inst(3, std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7});
  const BoundedSpec spec{6, 7, Epsilon(3)};
  const EnumerationOptions force{kDefaultBudget, true};
  std::size_t count = enumerate_bounded(inst, spec, [&](const PartialPolicy& pi) { expect_valid_length(pi, 7, 7); }, force);
  EXPECT_GT(count, 0u);
}

TEST(EnumerateBounded, BudgetExceededBeforeAnyOutput) {
  const Instance inst(4, std::vector<double>(8, 0.5));
  std::size_t visited = 0;
  try {
    enumerate_bounded(inst, BoundedSpec{1, 8, Epsilon(2)}, [&](const PartialPolicy&) { ++visited; }, EnumerationOptions{100.0, false});
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_DOUBLE_EQ(e.estimate(), 40320.0);
    EXPECT_DOUBLE_EQ(e.budget(), 100.0);
  }
  EXPECT_EQ(visited, 0u);
}

TEST(BestBounded, PrefersLikelyStop) {
  const Instance inst(1, {0.2, 0.8});
  const auto r = best_bounded(inst, BoundedSpec{1, 2, Epsilon(2)});
  EXPECT_EQ(r.policy[0], 1);
  EXPECT_EQ(r.candidates, 2u);
}

TEST(BestBounded, MinimalScoreAndTieBreak) {
  testkit::Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testkit::uniform_int(rng, 2, 6);
    const auto inst = testkit::random_instance(rng, n);
    const int a = testkit::uniform_int(rng, 1, n - 1);
    const int ap = testkit::uniform_int(rng, a + 1, n);
    const BoundedSpec spec{a, ap, Epsilon(2)};
    const auto best = best_bounded(inst, spec);
    enumerate_bounded(inst, spec, [&](const PartialPolicy& pi) {
      EXPECT_LE(best.score, bounded_score(inst, pi, a, ap) + kScoreTolerance);
    });
  }
  const Instance flat(2, std::vector<double>(5, 0.3));
  EXPECT_EQ(best_bounded(flat, BoundedSpec{2, 4, Epsilon(2)}).policy, P({0, 1, 2, 3}));
}

TEST(CertifyBounded, ExtremeReferenceAtTwoHundred) {
  testkit::Rng rng(62);
  const auto inst = testkit::random_instance(rng, 200);
  const auto ref = extreme_first_policy(inst);
  const BoundedSpec spec{30, 60, Epsilon(2)};
  const auto cert = certify_bounded(inst, ref, spec);
  EXPECT_TRUE(cert.sizes_ok);
  EXPECT_TRUE(cert.dominance_ok);
  EXPECT_TRUE(cert.pass);
  expect_valid_length(cert.policy, 200, 60);
  ASSERT_EQ(cert.rows.size(), 31u);
  for (std::size_t i = 0; i < cert.rows.size(); ++i) {
    const auto& r = cert.rows[i];
    EXPECT_EQ(r.level, 30 + static_cast<int>(i));
    EXPECT_GE(r.policy_tail, 0.0);
    EXPECT_LE(r.policy_tail, 1.0);
    EXPECT_GE(r.reference_tail, 0.0);
    EXPECT_LE(r.reference_tail, 1.0);
    if (i > 0) {
      EXPECT_LE(r.policy_tail, cert.rows[i - 1].policy_tail);
      EXPECT_LE(r.reference_tail, cert.rows[i - 1].reference_tail);
    }
  }
}

TEST(CertifyBounded, OwnOutputAsReference) {
  testkit::Rng rng(63);
  const auto inst = testkit::random_instance(rng, 120);
  const BoundedSpec spec{40, 90, Epsilon(3)};
  const auto first = certify_bounded(inst, testkit::random_permutation(rng, 120), spec);
  const auto again = certify_bounded(inst, pad_complete(first.policy, inst), spec);
  EXPECT_TRUE(again.pass);
}

TEST(CertifyBounded, RandomReferences) {
  testkit::Rng rng(64);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = testkit::uniform_int(rng, 60, 150);
    const auto inst = testkit::random_instance(rng, n);
    const int e = testkit::uniform_int(rng, 2, 3);
    const int a = testkit::uniform_int(rng, static_cast<int>(full_enumeration_threshold(Epsilon(e))), n - 1);
    const int ap = testkit::uniform_int(rng, a + 1, n);
    const auto cert = certify_bounded(inst, testkit::random_permutation(rng, n), BoundedSpec{a, ap, Epsilon(e)});
    EXPECT_TRUE(cert.sizes_ok);
    EXPECT_TRUE(cert.dominance_ok);
    EXPECT_TRUE(cert.pass) << "n=" << n << " e=" << e << " a=" << a << " a'=" << ap;
  }
}

TEST(CertifyBounded, Preconditions) {
  const Instance inst(5, std::vector<double>(40, 0.5));
  const auto ref = PartialPolicy::identity(40);
  EXPECT_THROW(certify_bounded(inst, ref, BoundedSpec{8, 20, Epsilon(2)}), ValidationError);
  EXPECT_THROW(certify_bounded(inst, ref.prefix(25), BoundedSpec{10, 30, Epsilon(2)}), ValidationError);
  EXPECT_NO_THROW(certify_bounded(inst, ref, BoundedSpec{10, 30, Epsilon(2)}));
  const Instance costed(2, {0.2, 0.4, 0.6}, {1, 2, 1});
  EXPECT_THROW(certify_bounded(costed, PartialPolicy::identity(3), BoundedSpec{1, 2, Epsilon(2)}), ValidationError);
}

TEST(ShiftSchedule, Invariants) {
  for (int e = 1; e <= 6; ++e) {
    const Epsilon eps(e);
    for (int n : {2, 3, 7, 8, 100, 1000, 123457}) {
      for (int l = 0; l < e; ++l) {
        const auto s = make_shift_schedule(n, eps, l);
        ASSERT_GE(s.thresholds.size(), 2u);
        EXPECT_EQ(s.thresholds.front(), 1);
        EXPECT_EQ(s.thresholds.back(), n);
        for (std::size_t j = 1; j < s.thresholds.size(); ++j) {
          EXPECT_LT(s.thresholds[j - 1], s.thresholds[j]);
          const double ratio = static_cast<double>(s.thresholds[j]) / s.thresholds[j - 1];
          EXPECT_LE(ratio, std::ldexp(1.0, j == 1 ? e + l : e));
        }
        // h is minimal: only the last threshold reaches n.
        for (int j = 0; j <= s.h(); ++j) EXPECT_LT(s.thresholds[static_cast<std::size_t>(j)], n);
      }
    }
  }
  EXPECT_THROW(make_shift_schedule(1, Epsilon(2), 0), ValidationError);
  EXPECT_THROW(make_shift_schedule(10, Epsilon(2), 2), ValidationError);
}

TEST(ShiftSchedule, SomeShiftContributesLittle) {
  testkit::Rng rng(65);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = testkit::uniform_int(rng, 2, 300);
    const auto inst = testkit::random_instance(rng, n);
    const auto ref = trial % 2 ? extreme_first_policy(inst) : testkit::random_permutation(rng, n);
    const auto tail = cost_tail(inst, ref);
    for (int e : {1, 2, 3, 5}) {
      const Epsilon eps(e);
      double best = 1e300, sum = 0.0;
      for (int l = 0; l < e; ++l) {
        const double c = shift_contribution(tail, eps, l);
        best = std::min(best, c);
        sum += c;
      }
      EXPECT_LE(sum, 2.0 * (1.0 + eps.value()) * tail.expected + 1e-9);
      EXPECT_LE(best, 2.0 * eps.value() * (1.0 + eps.value()) * tail.expected + 1e-9);
    }
  }
}

TEST(Ptas, SingleVariable) {
  const auto r = ptas::ptas(Instance(1, {0.4}), 0.5);
  EXPECT_EQ(r.policy, P({0}));
  EXPECT_DOUBLE_EQ(r.expected, 1.0);
}

TEST(Ptas, WithinFactorOfBruteForce) {
  testkit::Rng rng(66);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = testkit::uniform_int(rng, 2, 7);
    const auto inst = testkit::random_instance(rng, n);
    const double target = trial % 2 ? 0.5 : 1.0;
    const auto r = ptas::ptas(inst, target);
    EXPECT_EQ(r.policy.size(), static_cast<std::size_t>(n));
    EXPECT_NEAR(r.expected, expected_cost(inst, r.policy), 1e-12);
    EXPECT_LE(r.expected, (1.0 + target) * oracle::opt_na_bruteforce(inst).best_cost + 1e-12);
  }
}

TEST(Ptas, GuidedByBruteForceOptimum) {
  testkit::Rng rng(67);
  const auto inst = testkit::random_instance(rng, 8);
  const auto best = oracle::opt_na_bruteforce(inst);
  auto opt = options_for_target(0.5);
  opt.reference = best.best_policy;
  const auto r = ptas::ptas(inst, opt);
  EXPECT_TRUE(r.certified);
  EXPECT_LE(r.expected, 1.5 * best.best_cost + 1e-12);
}

TEST(Ptas, ForcedBucketCasesProduceCompletePolicies) {
  testkit::Rng rng(68);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = testkit::random_instance(rng, 8);
    PtasOptions opt;
    opt.eps = Epsilon(1);
    opt.enumeration.force_bucket_cases = true;
    const auto r = ptas::ptas(inst, opt);
    EXPECT_EQ(r.policy.size(), 8u);
    bool saw_bucket_case = false;
    for (const auto& level : r.levels) saw_bucket_case |= level.kind != BoundedCase::full_enumeration;
    EXPECT_TRUE(saw_bucket_case || r.shift != 0);
    EXPECT_NEAR(r.expected, expected_cost(inst, r.policy), 1e-12);
  }
}

TEST(Ptas, BudgetIsCheckedUpFront) {
  const Instance inst(4, std::vector<double>(8, 0.5));
  auto opt = options_for_target(1.0);
  opt.enumeration.budget = 1000.0;
  EXPECT_THROW(ptas::ptas(inst, opt), BudgetExceeded);
  opt.enumeration.budget = 1e6;
  const auto small = ptas::ptas(inst, opt);
  opt.enumeration.budget = 1e9;
  EXPECT_LE(ptas::ptas(inst, opt).expected, small.expected);
}

TEST(Ptas, GuidedAtScale) {
  testkit::Rng rng(69);
  for (int n : {100, 300}) {
    const auto inst = testkit::random_instance(rng, n);
    const auto ref = extreme_first_policy(inst);
    for (int e : {2, 3}) {
      PtasOptions opt;
      opt.eps = Epsilon(e);
      opt.reference = ref;
      const auto r = ptas::ptas(inst, opt);
      EXPECT_TRUE(r.certified);
      EXPECT_EQ(r.policy.size(), static_cast<std::size_t>(n));
      EXPECT_LE(r.expected, guided_chain_factor(opt.eps) * expected_cost(inst, ref) + 1e-9);
    }
  }
}

TEST(Ptas, RejectsNonUnitCostAndBadReference) {
  const Instance costed(1, {0.2, 0.8}, {1, 2});
  EXPECT_THROW(ptas::ptas(costed, 0.5), ValidationError);
  auto opt = options_for_target(0.5);
  opt.reference = P({0});
  EXPECT_THROW(ptas::ptas(Instance(1, {0.2, 0.8}), opt), ValidationError);
}

TEST(ExtremeFirst, OrdersByDistanceFromHalf) {
  const Instance inst(2, {0.05, 0.4, 0.5, 0.7, 0.99});
  EXPECT_EQ(extreme_first_policy(inst), P({4, 0, 3, 1, 2}));
}
