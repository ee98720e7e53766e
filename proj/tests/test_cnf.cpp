#include <gtest/gtest.h>

#include <bit>
#include <cstdint>

#include "fixtures.hpp"
#include "mdual/generators.hpp"

using namespace mdual;
using namespace mdual::test;

namespace {

std::uint32_t mask(const VarSet& s) {
  std::uint32_t m = 0;
  s.for_each([&](int v) { m |= 1U << (v - 1); });
  return m;
}

Assignment bits(const std::string& s) { return Assignment::parse(s); }

}  // namespace

TEST(Minimize, DropsSupersets) {
  EXPECT_EQ(minimize(cnf(2, {{1}, {1, 2}})), cnf(2, {{1}}));
}

TEST(Minimize, PrimeExampleUnchanged) {
  EXPECT_EQ(minimize(prime_example()), prime_example());
}

TEST(Minimize, MatchesInclusionFilterOnRandomInputs) {
  gen::Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    std::vector<Clause> cs;
    int m = rng.uniform(1, 12);
    for (int j = 0; j < m; ++j) {
      Clause c(8);
      int k = rng.uniform(1, 5);
      for (int e = 0; e < k; ++e) c.insert(rng.uniform(1, 8));
      if (std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
    }
    MonotoneCnf in(8, cs);
    std::vector<Clause> expected;
    for (const auto& c : cs) {
      bool minimal = true;
      for (const auto& d : cs)
        if (!(d == c) && (mask(d) & ~mask(c)) == 0) minimal = false;
      if (minimal) expected.push_back(c);
    }
    MonotoneCnf out = minimize(in);
    EXPECT_EQ(out, MonotoneCnf(8, expected));
    EXPECT_EQ(minimize(out), out);
    EXPECT_TRUE(is_prime(out));
  }
}

TEST(Minimize, PreservesFunctionExhaustively) {
  gen::Rng rng(5);
  for (int round = 0; round < 40; ++round) {
    int n = rng.uniform(1, 10);
    std::vector<Clause> cs;
    for (int j = 0; j < rng.uniform(1, 10); ++j) {
      Clause c(n);
      for (int e = 0; e < rng.uniform(1, 4); ++e) c.insert(rng.uniform(1, n));
      if (std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
    }
    MonotoneCnf phi(n, cs);
    MonotoneCnf prime = minimize(phi);
    for (std::uint32_t w = 0; w < (1U << n); ++w) {
      Assignment a(n);
      for (int v = 1; v <= n; ++v) a.set(v, (w >> (v - 1)) & 1U);
      ASSERT_EQ(evaluate(prime, a), evaluate(phi, a));
    }
  }
}

TEST(Evaluate, PrimeExampleVectors) {
  auto phi = prime_example();
  EXPECT_TRUE(evaluate(phi, bits("1100")));
  EXPECT_TRUE(evaluate(phi, bits("0111")));
  EXPECT_FALSE(evaluate(phi, bits("1000")));
  // The true points listed for this function.
  for (const char* w : {"1100", "1110", "1101", "1111", "0111"}) EXPECT_TRUE(evaluate(phi, bits(w))) << w;
}

TEST(Evaluate, RejectsLengthMismatch) { EXPECT_THROW(evaluate(prime_example(), bits("11")), cnf_error); }

TEST(Restrict, FourClauseTable) {
  auto phi = four_clause();
  auto id = VariableOrdering::identity(4);
  EXPECT_TRUE(restrict(phi, id, 0).is_constant_one());
  EXPECT_TRUE(restrict(phi, id, 1).is_constant_one());
  EXPECT_EQ(restrict(phi, id, 2), cnf(4, {{1, 2}}));
  EXPECT_EQ(restrict(phi, id, 3), cnf(4, {{1, 2}, {1, 3}}));
  EXPECT_EQ(restrict(phi, id, 4), phi);
}

TEST(Delta, FourClauseTable) {
  auto phi = four_clause();
  auto id = VariableOrdering::identity(4);
  EXPECT_TRUE(delta(phi, id, 1).is_constant_one());
  EXPECT_EQ(delta(phi, id, 2), cnf(4, {{1, 2}}));
  EXPECT_EQ(delta(phi, id, 3), cnf(4, {{1, 3}}));
  EXPECT_EQ(delta(phi, id, 4), cnf(4, {{2, 3, 4}, {1, 4}}));
}

TEST(DeltaConditioned, FourClauseExample) {
  auto id = VariableOrdering::identity(4);
  auto d4 = delta(four_clause(), id, 4);
  auto r = delta_conditioned(d4, id, 4, term(4, {2, 3, 4}));
  ASSERT_FALSE(r.is_zero());
  EXPECT_EQ(r.cnf, cnf(4, {{1}}));
}

TEST(DeltaConditioned, SingletonClauseGivesZero) {
  auto phi = cnf(3, {{1, 2}, {3}});
  auto id = VariableOrdering::identity(3);
  auto r = delta_conditioned(delta(phi, id, 3), id, 3, term(3, {3}));
  EXPECT_TRUE(r.is_zero());
}

TEST(DeltaConditioned, CoveredClausesGiveOne) {
  auto id = VariableOrdering::identity(4);
  auto d4 = delta(four_clause(), id, 4);
  auto r = delta_conditioned(d4, id, 4, term(4, {1, 2, 4}));
  EXPECT_TRUE(r.is_one());
}

TEST(DeltaConditioned, RejectsClauseWithoutPivot) {
  auto id = VariableOrdering::identity(3);
  EXPECT_THROW(delta_conditioned(cnf(3, {{1, 2}}), id, 3, term(3, {})), cnf_error);
}

TEST(TermKey, DirectSums) {
  EXPECT_EQ(term_key(term(4, {2, 3, 4}), 4), 7);
  EXPECT_EQ(term_key(term(4, {1, 2}), 4), 12);
  EXPECT_EQ(term_key(term(4, {}), 4), 0);
}

TEST(TermKey, ExactBeyondMachineWord) {
  int n = 300;
  TermKey k = term_key(Term(n, {1}), n);
  TermKey expected = 1;
  expected <<= 299;
  EXPECT_EQ(k, expected);
  EXPECT_TRUE(key_less(Term(n, {2, 3, 299, 300}), Term(n, {1})));
}

TEST(TermKey, InjectiveAndAgreesWithKeyOrder) {
  int n = 6;
  std::vector<Term> all;
  for (std::uint32_t m = 0; m < (1U << n); ++m) {
    Term t(n);
    for (int v = 1; v <= n; ++v)
      if (m >> (v - 1) & 1U) t.insert(v);
    all.push_back(t);
  }
  std::set<TermKey> keys;
  for (const auto& t : all) keys.insert(term_key(t, n));
  EXPECT_EQ(keys.size(), all.size());
  for (const auto& a : all)
    for (const auto& b : all) {
      // Lexicographic comparison of characteristic vectors read x1 first.
      std::string sa, sb;
      for (int v = 1; v <= n; ++v) {
        sa += a.contains(v) ? '1' : '0';
        sb += b.contains(v) ? '1' : '0';
      }
      ASSERT_EQ(term_key(a, n) < term_key(b, n), sa < sb);
      ASSERT_EQ(key_less(a, b), sa < sb);
    }
}

TEST(TermKey, FollowsOrdering) {
  VariableOrdering ord({3, 1, 2});
  // Under ord, x3 plays x_1 (weight 4).
  EXPECT_EQ(term_key(term(3, {3}), ord), 4);
  EXPECT_EQ(term_key(term(3, {1, 2}), ord), 3);
}

TEST(Implicant, PrimeExample) {
  auto phi = prime_example();
  EXPECT_TRUE(is_prime_implicant(phi, term(4, {1, 2})));
  EXPECT_TRUE(is_prime_implicant(phi, term(4, {2, 3, 4})));
  EXPECT_TRUE(is_implicant(phi, term(4, {1, 2, 3})));
  EXPECT_FALSE(is_prime_implicant(phi, term(4, {1, 2, 3})));
  EXPECT_FALSE(is_implicant(phi, term(4, {1})));
}

TEST(Implicant, PrimalityMatchesSubsetEnumeration) {
  gen::Rng rng(3);
  for (int round = 0; round < 60; ++round) {
    auto phi = gen::random_prime(rng, 6, rng.uniform(1, 6), 1, 3);
    int n = phi.n();
    for (std::uint32_t m = 0; m < (1U << n); ++m) {
      Term t(n);
      for (int v = 1; v <= n; ++v)
        if (m >> (v - 1) & 1U) t.insert(v);
      bool by_definition = is_implicant(phi, t);
      for (std::uint32_t sub = m; by_definition && sub; sub = (sub - 1) & m) {
        if (sub == m) continue;
        Term s(n);
        for (int v = 1; v <= n; ++v)
          if (sub >> (v - 1) & 1U) s.insert(v);
        if (is_implicant(phi, s)) by_definition = false;
      }
      if (by_definition && m != 0 && is_implicant(phi, Term(n))) by_definition = false;
      ASSERT_EQ(is_prime_implicant(phi, t), by_definition);
    }
  }
}

TEST(RestrictionProperties, RestrictionBoundsAndDeltaPartition) {
  gen::Rng rng(17);
  for (int round = 0; round < 100; ++round) {
    auto phi = gen::random_prime(rng, 7, rng.uniform(1, 10), 1, 4);
    int n = phi.n();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    rng.shuffle(perm);
    VariableOrdering ord(perm);
    std::size_t total = 0;
    for (int i = 0; i <= n; ++i) {
      auto ri = restrict(phi, ord, i);
      EXPECT_LE(ri.length(), phi.length());
      EXPECT_LE(ri.size(), phi.size());
      if (i == 0) continue;
      auto di = delta(phi, ord, i);
      total += di.size();
      std::vector<Clause> joined = restrict(phi, ord, i - 1).clauses();
      for (const auto& c : di.clauses()) joined.push_back(c);
      EXPECT_EQ(MonotoneCnf(n, joined), ri);
    }
    EXPECT_EQ(total, phi.size());
  }
}

TEST(MonotoneCnf, RejectsInvalidClauses) {
  EXPECT_THROW(cnf(2, {{}}), cnf_error);
  EXPECT_THROW(cnf(2, {{3}}), cnf_error);
  EXPECT_THROW(cnf(2, {{1, 1}}), cnf_error);
  EXPECT_THROW(cnf(2, {{1}, {1}}), cnf_error);
  EXPECT_THROW(VariableOrdering({1, 1}), cnf_error);
}

TEST(Compaction, RenumbersInOrder) {
  auto cp = compact(cnf(5, {{2, 5}, {4}}));
  EXPECT_EQ(cp.cnf, cnf(3, {{1, 3}, {2}}));
  EXPECT_EQ(cp.expand(term(3, {1, 2})).to_vector(), (std::vector<int>{2, 4}));
}
