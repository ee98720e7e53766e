#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "mdual/dualize.hpp"
#include "mdual/fk.hpp"
#include "mdual/generators.hpp"
#include "mdual/oracle.hpp"

using namespace mdual;
using namespace mdual::fk;
using mdual::test::cnf;
using mdual::oracle::brute_dual_check;

namespace {

MonotoneCnf dual_of(const MonotoneCnf& phi) { return terms_as_cnf(phi.n(), dualize_all(phi)); }

// All prime CNFs over n <= 4 variables: antichains of nonempty subsets.
std::vector<MonotoneCnf> all_prime(int n) {
  std::vector<MonotoneCnf> out;
  int subsets = (1 << n) - 1;  // nonempty masks 1..subsets
  std::vector<int> chosen;
  auto rec = [&](auto&& self, int next) -> void {
    std::vector<Clause> cs;
    for (int m : chosen) {
      Clause c(n);
      for (int v = 0; v < n; ++v)
        if (m >> v & 1) c.insert(v + 1);
      cs.push_back(c);
    }
    out.emplace_back(n, cs);
    for (int m = next; m <= subsets; ++m) {
      bool ok = true;
      for (int c : chosen)
        if ((c & m) == c || (c & m) == m) ok = false;
      if (!ok) continue;
      chosen.push_back(m);
      self(self, m + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

void expect_agrees(const MonotoneCnf& f, const MonotoneCnf& g) {
  DualPair pair(f, g);
  bool truth = brute_dual_check(f, g).dual;
  auto a = check_dual_A(pair);
  auto b = check_dual_B(pair);
  ASSERT_EQ(a.dual, truth);
  ASSERT_EQ(b.dual, truth);
  if (!truth) {
    ASSERT_TRUE(pair.is_witness(*a.witness));
    ASSERT_TRUE(pair.is_witness(*b.witness));
    auto rep = replay_certificate(pair, *b.certificate);
    ASSERT_EQ(rep.outcome, ReplayOutcome::confirmed) << rep.reason;
    ASSERT_TRUE(pair.is_witness(*rep.witness));
  }
}

}  // namespace

TEST(Chi, KnownValues) {
  EXPECT_NEAR(chi(4), 2, 1e-9);
  EXPECT_NEAR(chi(27), 3, 1e-9);
  double c = chi(1e6);
  EXPECT_GT(c, 7);
  EXPECT_LT(c, 7.5);
  EXPECT_DOUBLE_EQ(chi(1), 1);
  EXPECT_NEAR(epsilon_of(27), 1.0 / 3, 1e-9);
}

TEST(Chi, ExactThreshold) {
  // v = 27, eps = 1/3.
  EXPECT_TRUE(frequency_at_most_epsilon(1, 3, 27));
  EXPECT_FALSE(frequency_at_most_epsilon(2, 5, 27));
  EXPECT_TRUE(frequency_at_most_epsilon(1, 4, 27));
  EXPECT_TRUE(frequency_at_most_epsilon(1, 2, 4));
  EXPECT_FALSE(frequency_at_most_epsilon(2, 3, 4));
}

TEST(Witness, SingletonPair) {
  DualPair pair(cnf(2, {{1}}), cnf(2, {{2}}));
  auto w = precheck_intersections(pair);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->to_string(), "01");
  EXPECT_TRUE(pair.is_witness(*w));
  EXPECT_FALSE(check_dual_A(pair).dual);
  auto b = check_dual_B(pair);
  ASSERT_FALSE(b.dual);
  EXPECT_TRUE(pair.is_witness(*b.witness));
}

TEST(ConditionsA, EqualPairFailsWeightCondition) {
  DualPair pair(cnf(2, {{1, 2}}), cnf(2, {{1, 2}}));
  EXPECT_FALSE(precheck_intersections(pair));
  auto root = pair.root();
  EXPECT_FALSE(fk::detail::variable_witness(root));
  EXPECT_FALSE(fk::detail::weight_condition(root));
  auto w = check_conditions_A(pair);
  ASSERT_TRUE(w);
  EXPECT_TRUE(pair.is_witness(*w));
}

TEST(ConditionsA, SingletonSplitPasses) {
  DualPair pair(cnf(2, {{1, 2}}), cnf(2, {{1}, {2}}));
  EXPECT_TRUE(fk::detail::weight_condition(pair.root()));
  EXPECT_FALSE(check_conditions_A(pair));
}

TEST(ConditionsA, DualPairPasses) {
  auto phi = mdual::test::four_clause();
  DualPair pair(phi, dual_of(phi));
  EXPECT_FALSE(precheck_intersections(pair));
  EXPECT_FALSE(check_conditions_A(pair));
  EXPECT_TRUE(check_dual_A(pair).dual);
  EXPECT_TRUE(check_dual_B(pair).dual);
}

TEST(ConditionsA, VariableAndSizeWitnesses) {
  // x3 only on one side.
  DualPair p1(cnf(3, {{1, 2, 3}}), cnf(3, {{1}, {2}}));
  auto w1 = check_conditions_A(p1);
  ASSERT_TRUE(w1);
  EXPECT_TRUE(p1.is_witness(*w1));
  // clause longer than the other side.
  DualPair p2(cnf(3, {{1, 2, 3}}), cnf(3, {{1, 2, 3}}));
  auto w2 = check_conditions_A(p2);
  ASSERT_TRUE(w2);
  EXPECT_TRUE(p2.is_witness(*w2));
}

TEST(FK, SameSingletonsAreNotDual) {
  DualPair pair(cnf(2, {{1}, {2}}), cnf(2, {{1}, {2}}));
  auto a = check_dual_A(pair);
  auto b = check_dual_B(pair);
  ASSERT_FALSE(a.dual);
  ASSERT_FALSE(b.dual);
  EXPECT_TRUE(pair.is_witness(*a.witness));
  EXPECT_TRUE(pair.is_witness(*b.witness));
}

TEST(FK, CrossPairHasReplayableCertificate) {
  DualPair pair(cnf(4, {{1, 2}, {3, 4}}), cnf(4, {{1, 3}, {2, 4}}));
  EXPECT_FALSE(brute_dual_check(pair.phi, pair.psi).dual);
  auto b = check_dual_B(pair);
  ASSERT_FALSE(b.dual);
  ASSERT_TRUE(b.certificate);
  auto rep = replay_certificate(pair, *b.certificate);
  ASSERT_EQ(rep.outcome, ReplayOutcome::confirmed) << rep.reason;
  EXPECT_TRUE(pair.is_witness(*rep.witness));
  EXPECT_EQ(*rep.witness, *b.witness);
}

TEST(FK, RootLeafGivesEmptyCertificate) {
  DualPair pair(cnf(3, {{1, 2}}), cnf(3, {{1}, {3}}));
  auto b = check_dual_B(pair);
  ASSERT_FALSE(b.dual);
  const auto& c = *b.certificate;
  ASSERT_EQ(c.ac.size(), 1U);
  EXPECT_EQ(c.ac[0].alpha, 0U);
  EXPECT_TRUE(c.ac[0].gamma.empty());
  EXPECT_TRUE(c.b.empty());
  EXPECT_LE(c.bit_length(), 1U);
  EXPECT_EQ(replay_certificate(pair, c).outcome, ReplayOutcome::confirmed);
}

TEST(FK, ExhaustiveAgreementUpToFourVars) {
  for (int n = 1; n <= 4; ++n) {
    auto all = all_prime(n);
    for (const auto& f : all)
      for (const auto& g : all) expect_agrees(f, g);
  }
}

TEST(FK, DualPairsFromDualize) {
  gen::Rng rng(7);
  for (int rep = 0; rep < 60; ++rep) {
    int n = rng.uniform(3, 10);
    auto phi = gen::random_prime(rng, n, rng.uniform(2, 8), 1, 4);
    auto psi = dual_of(phi);
    DualPair pair(phi, psi);
    AStats as;
    EXPECT_TRUE(check_dual_A(pair, &as).dual);
    auto b = check_dual_B(pair);
    EXPECT_TRUE(b.dual);
    EXPECT_EQ(b.stats.volume_violations, 0U);
    double v = static_cast<double>(std::max<std::size_t>(pair.volume(), 2));
    EXPECT_LE(b.stats.max_a, pair.volume());
    EXPECT_LE(static_cast<double>(b.stats.max_b), std::log2(v) + 1e-9);
    EXPECT_LE(static_cast<double>(b.stats.max_c), std::log2(v) * std::log2(v) + 1e-9);
    EXPECT_LE(as.max_right, pair.volume());
    EXPECT_EQ(as.low_frequency_splits, 0U);
  }
}

TEST(FK, RandomAgreementUpToTenVars) {
  gen::Rng rng(11);
  for (int rep = 0; rep < 300; ++rep) {
    int n = rng.uniform(2, 10);
    auto phi = gen::random_prime(rng, n, rng.uniform(1, 6), 1, 4);
    n = phi.n();
    auto psi = dual_of(phi);
    // perturb: drop a clause, add a clause, or take an unrelated CNF.
    std::vector<Clause> cs = psi.clauses();
    int mode = rng.uniform(0, 3);
    if (mode == 0 && cs.size() > 1) cs.erase(cs.begin() + rng.uniform(0, static_cast<int>(cs.size()) - 1));
    if (mode == 1) {
      Clause c(n);
      for (int v = 1; v <= n; ++v)
        if (rng.coin(1, 2)) c.insert(v);
      if (!c.empty() && std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
    }
    MonotoneCnf g = mode == 2 ? MonotoneCnf(n, gen::random_prime(rng, n, rng.uniform(1, 6), 1, 4).clauses())
                              : minimize(MonotoneCnf(n, cs));
    expect_agrees(phi, g);
  }
}

TEST(Certificate, RoundTripLabels) {
  gen::Rng rng(5);
  int checked = 0;
  for (int rep = 0; rep < 200 && checked < 40; ++rep) {
    int n = rng.uniform(4, 10);
    auto phi = gen::random_prime(rng, n, rng.uniform(3, 8), 2, 4);
    n = phi.n();
    auto cs = dual_of(phi).clauses();
    if (cs.size() < 4) continue;
    cs.erase(cs.begin() + rng.uniform(0, static_cast<int>(cs.size()) - 1));
    DualPair pair(phi, MonotoneCnf(n, cs));
    auto b = check_dual_B(pair);
    ASSERT_FALSE(b.dual);
    auto rep2 = replay_certificate(pair, *b.certificate);
    ASSERT_EQ(rep2.outcome, ReplayOutcome::confirmed) << rep2.reason;
    ASSERT_EQ(rep2.path.size(), b.path.size());
    for (std::size_t k = 0; k < b.path.size(); ++k) {
      EXPECT_EQ(rep2.path[k].move, b.path[k].move);
      EXPECT_EQ(rep2.path[k].label, b.path[k].label);
    }
    EXPECT_LE(b.certificate->b.size(), std::log2(static_cast<double>(pair.volume())) + 1e-9);
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(Certificate, BitLength) {
  Certificate c;
  c.v_star = 100;  // 7 bits per j-label
  c.ac = {AcBlock{5, {true, false}}, AcBlock{0, {}}};
  c.b = {3};
  EXPECT_EQ(c.bit_length(), 3U + 2U + 1U + 7U);
  auto back = Certificate::from_moves(100, {{Move::Kind::a}, {Move::Kind::c1}, {Move::Kind::b, 2}, {Move::Kind::c0}});
  EXPECT_EQ(back.ac.size(), 2U);
  EXPECT_EQ(back.ac[0].alpha, 1U);
  EXPECT_EQ(back.ac[0].gamma, std::vector<bool>{true});
  EXPECT_EQ(back.b, std::vector<std::size_t>{2});
  EXPECT_EQ(back.ac[1].gamma, std::vector<bool>{false});
}

TEST(Certificate, ForeignCertificateIsRejected) {
  DualPair pair(cnf(4, {{1, 2}, {3, 4}}), cnf(4, {{1, 3}, {2, 4}}));
  Certificate bad;
  bad.v_star = pair.volume();
  bad.ac[0].alpha = 50;
  EXPECT_EQ(replay_certificate(pair, bad).outcome, ReplayOutcome::invalid);
  Certificate wrong_v;
  wrong_v.v_star = 99;
  EXPECT_EQ(replay_certificate(pair, wrong_v).outcome, ReplayOutcome::invalid);
}
