#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mdual/dualize.hpp"
#include "mdual/generators.hpp"
#include "mdual/oracle.hpp"

using namespace mdual;
using namespace mdual::test;

namespace {

VariableOrdering random_ordering(gen::Rng& rng, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  rng.shuffle(perm);
  return VariableOrdering(perm);
}

}  // namespace

TEST(SmallestPrimeImplicant, Examples) {
  EXPECT_EQ(smallest_prime_implicant(four_clause()).to_vector(), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(smallest_prime_implicant(cnf(1, {{1}})).to_vector(), (std::vector<int>{1}));
  EXPECT_TRUE(smallest_prime_implicant(MonotoneCnf(3)).empty());
}

TEST(SmallestPrimeImplicant, MatchesOracleMinimum) {
  gen::Rng rng(41);
  for (int round = 0; round < 100; ++round) {
    auto phi = gen::random_prime(rng, 8, rng.uniform(1, 10), 1, 4);
    auto ord = random_ordering(rng, phi.n());
    auto pis = oracle::brute_transversals(phi);
    auto best = *std::min_element(pis.begin(), pis.end(),
                                  [&](const Term& a, const Term& b) { return term_key(a, ord) < term_key(b, ord); });
    EXPECT_EQ(smallest_prime_implicant(phi, ord), best);
  }
}

TEST(ExtendToSmallest, IdentityOnPrimeImplicant) {
  auto id = VariableOrdering::identity(4);
  EXPECT_EQ(extend_to_smallest(four_clause(), id, term(4, {1, 4}), 4).to_vector(), (std::vector<int>{1, 4}));
  EXPECT_EQ(extend_to_smallest(four_clause(), id, term(4, {2, 3, 4}), 4).to_vector(), (std::vector<int>{2, 3, 4}));
}

TEST(ExtendToSmallest, MatchesOracleFilterByPrefix) {
  gen::Rng rng(43);
  for (int round = 0; round < 80; ++round) {
    auto phi = gen::random_prime(rng, 8, rng.uniform(1, 10), 1, 4);
    int n = phi.n();
    auto ord = random_ordering(rng, n);
    auto pis = oracle::brute_transversals(phi);
    for (int i = 0; i <= n; ++i) {
      auto fi = restrict(phi, ord, i);
      for (const auto& t : pis) {
        Term prefix(n);
        t.for_each([&](int v) {
          if (ord.position(v) <= i) prefix.insert(v);
        });
        if (!is_prime_implicant(fi, prefix)) continue;
        const Term* best = nullptr;
        for (const auto& s : pis) {
          Term sp(n);
          s.for_each([&](int v) {
            if (ord.position(v) <= i) sp.insert(v);
          });
          if (!(sp == prefix)) continue;
          if (!best || term_key(s, ord) < term_key(*best, ord)) best = &s;
        }
        ASSERT_NE(best, nullptr);
        ASSERT_EQ(extend_to_smallest(phi, ord, prefix, i), *best);
      }
    }
  }
}

TEST(ExtendToSmallest, ReportsImpossiblePrefix) {
  auto id = VariableOrdering::identity(3);
  // Fixing x1 = x2 = 0 falsifies (x1 v x2).
  EXPECT_THROW(extend_to_smallest(cnf(3, {{1, 2}, {3}}), id, term(3, {}), 2), std::logic_error);
}

TEST(RhoOfDelta, Examples) {
  EXPECT_EQ(as_set(rho_of_delta(cnf(4, {{1}}), {})), (std::set<std::vector<int>>{{1}}));
  EXPECT_EQ(as_set(rho_of_delta(cnf(3, {{1, 2}, {2, 3}}), RhoStrategy::expand())),
            (std::set<std::vector<int>>{{2}, {1, 3}}));
  EXPECT_EQ(as_set(rho_of_delta(cnf(3, {{1, 2}, {2, 3}}), RhoStrategy::recursive(4))),
            (std::set<std::vector<int>>{{2}, {1, 3}}));
  auto one = rho_of_delta(MonotoneCnf(3), {});
  ASSERT_EQ(one.size(), 1U);
  EXPECT_TRUE(one[0].empty());
}

TEST(RhoOfDelta, BudgetExceeded) {
  EXPECT_THROW(rho_of_delta(cnf(3, {{1, 2}, {2, 3}}), RhoStrategy::recursive(1)), budget_error);
}

TEST(Dualize, PrimeExampleInOrder) {
  EXPECT_EQ(as_lists(dualize_all(prime_example())), (std::vector<std::vector<int>>{{2, 3, 4}, {1, 2}}));
}

TEST(Dualize, FourClauseInOrder) {
  EXPECT_EQ(as_lists(dualize_all(four_clause())),
            (std::vector<std::vector<int>>{{2, 3, 4}, {1, 4}, {1, 3}, {1, 2}}));
}

TEST(Dualize, SingleClause) {
  EXPECT_EQ(as_lists(dualize_all(cnf(2, {{1, 2}}))), (std::vector<std::vector<int>>{{2}, {1}}));
}

TEST(Dualize, ConstantOne) {
  auto out = dualize_all(MonotoneCnf(0));
  ASSERT_EQ(out.size(), 1U);
  EXPECT_TRUE(out[0].empty());
}

TEST(Dualize, RejectsUnusedVariablesAndNonPrime) {
  EXPECT_THROW(Dualizer(cnf(3, {{1, 2}}), VariableOrdering::identity(3)), cnf_error);
  EXPECT_THROW(Dualizer(cnf(2, {{1}, {1, 2}}), VariableOrdering::identity(2)), cnf_error);
}

TEST(Dualize, RestartIsDeterministic) {
  Dualizer dz(four_clause(), VariableOrdering::identity(4));
  std::vector<Term> first, second;
  while (auto t = dz.next()) first.push_back(*t);
  dz.reset();
  while (auto t = dz.next()) second.push_back(*t);
  EXPECT_EQ(first, second);
}

// Output-set equivalence, strict key order, primality, the |rho| <= |PI(f)| bound and agreement of
// the two rho strategies, on random prime CNFs under random orderings.
TEST(Dualize, RandomAgainstOracle) {
  gen::Rng rng(101);
  for (int round = 0; round < 150; ++round) {
    auto phi = gen::random_prime(rng, rng.uniform(2, 12), rng.uniform(1, 20), 1, 5);
    auto ord = random_ordering(rng, phi.n());
    DualizeStats stats;
    auto out = dualize_all(phi, ord, {}, &stats);
    auto expected = oracle::brute_transversals(phi);
    ASSERT_EQ(as_set(out), as_set(expected));
    ASSERT_EQ(out.size(), expected.size());
    for (std::size_t k = 1; k < out.size(); ++k) ASSERT_LT(term_key(out[k - 1], ord), term_key(out[k], ord));
    for (const auto& t : out) ASSERT_TRUE(is_prime_implicant(phi, t));
    EXPECT_LE(stats.max_rho, out.size());
    EXPECT_EQ(as_set(dualize_all(phi, ord, RhoStrategy::recursive(16))), as_set(out));
    EXPECT_EQ(as_set(dualize_all(phi, ord, RhoStrategy::expand())), as_set(out));
  }
}

TEST(Dualize, Involution) {
  gen::Rng rng(103);
  for (int round = 0; round < 60; ++round) {
    auto phi = gen::random_prime(rng, rng.uniform(2, 10), rng.uniform(1, 12), 1, 4);
    auto tr = dualize_all(phi);
    auto back = dualize_all(terms_as_cnf(phi.n(), tr));
    EXPECT_EQ(terms_as_cnf(phi.n(), back), phi);
  }
}

TEST(RDualize, OneCnf) {
  auto r = r_dualize(cnf(3, {{1}, {3}}), 8);
  EXPECT_EQ(as_lists(r.terms), (std::vector<std::vector<int>>{{1, 3}}));
  EXPECT_EQ(r.depth, 1);
}

TEST(RDualize, TwoCnf) {
  auto r = r_dualize(cnf(3, {{1, 2}, {2, 3}}), 8);
  EXPECT_EQ(as_set(r.terms), (std::set<std::vector<int>>{{2}, {1, 3}}));
  EXPECT_LE(r.depth, 2);
}

TEST(RDualize, ConstantOne) {
  auto r = r_dualize(MonotoneCnf(0), 1);
  ASSERT_EQ(r.terms.size(), 1U);
  EXPECT_EQ(r.depth, 1);
}

TEST(RDualize, DepthBoundedByClauseSize) {
  gen::Rng rng(107);
  for (int round = 0; round < 60; ++round) {
    int k = rng.uniform(1, 4);
    auto phi = gen::k_cnf(rng, rng.uniform(2, 10), rng.uniform(1, 14), k);
    auto r = r_dualize(phi, k);
    EXPECT_LE(r.depth, k);
    EXPECT_EQ(as_set(r.terms), as_set(oracle::brute_transversals(phi)));
  }
}

TEST(RDualize, DepthLimitExceeded) { EXPECT_THROW(r_dualize(cnf(3, {{1, 2}, {2, 3}}), 1), budget_error); }

TEST(MeasureDelay, SingletonOutput) {
  Dualizer dz(cnf(2, {{1}, {2}}), VariableOrdering::identity(2));
  auto rep = measure_delay(dz);
  EXPECT_EQ(rep.outputs, 1U);
  EXPECT_FALSE(rep.truncated);
  EXPECT_EQ(rep.max_ns, rep.first_ns);
  EXPECT_EQ(rep.max_ns + rep.tail_ns, rep.total_ns);
}

TEST(MeasureDelay, Truncates) {
  Dualizer dz(four_clause(), VariableOrdering::identity(4));
  auto rep = measure_delay(dz, 2);
  EXPECT_EQ(rep.outputs, 2U);
  EXPECT_TRUE(rep.truncated);
  EXPECT_LE(rep.max_ns, rep.total_ns);
}
