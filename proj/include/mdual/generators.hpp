#pragma once

// Seeded instance families for tests and the bench harness. Every generator
// returns a prime CNF over a compacted universe (all variables occur).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "mdual/cnf.hpp"

namespace mdual::gen {

/// mt19937_64 with an unbiased bounded draw that does not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  /// Uniform integer in [lo, hi].
  int uniform(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
    std::uint64_t x;
    do x = eng_();
    while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

  bool coin(int num, int den) { return uniform(0, den - 1) < num; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(uniform(0, static_cast<int>(i) - 1))]);
  }

 private:
  std::mt19937_64 eng_;
};

inline MonotoneCnf finish(int n, std::vector<Clause> clauses) {
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
  return compact(minimize(MonotoneCnf(n, std::move(clauses)))).cnf;
}

/// m random clauses with sizes in [min_size, max_size] over n variables.
inline MonotoneCnf random_prime(Rng& rng, int n, int m, int min_size, int max_size) {
  std::vector<Clause> cs;
  for (int j = 0; j < m; ++j) {
    int size = rng.uniform(min_size, std::min(max_size, n));
    std::vector<int> vars(static_cast<std::size_t>(n));
    std::iota(vars.begin(), vars.end(), 1);
    rng.shuffle(vars);
    Clause c(n);
    for (int k = 0; k < size; ++k) c.insert(vars[static_cast<std::size_t>(k)]);
    cs.push_back(std::move(c));
  }
  return finish(n, std::move(cs));
}

/// Every variable occurs at most k times; all clauses have the same size.
inline MonotoneCnf read_k(Rng& rng, int n, int k, int clause_size) {
  std::vector<int> slots;
  for (int v = 1; v <= n; ++v)
    for (int r = 0; r < k; ++r) slots.push_back(v);
  rng.shuffle(slots);
  std::vector<Clause> cs;
  Clause cur(n);
  for (int v : slots) {
    if (cur.contains(v)) continue;
    cur.insert(v);
    if (cur.size() == clause_size) {
      cs.push_back(cur);
      cur = Clause(n);
    }
  }
  return finish(n, std::move(cs));
}

/// Built position by position: each variable i closes at most k clauses whose
/// other members precede it, so the identity ordering has |Delta^i| <= k.
inline MonotoneCnf k_degenerate(Rng& rng, int n, int k, int max_extra = 2) {
  std::vector<Clause> cs;
  for (int i = 2; i <= n; ++i) {
    int count = rng.uniform(1, k);
    for (int j = 0; j < count; ++j) {
      Clause c(n);
      c.insert(i);
      int extra = rng.uniform(1, std::min(max_extra, i - 1));
      for (int e = 0; e < extra; ++e) c.insert(rng.uniform(1, i - 1));
      cs.push_back(std::move(c));
    }
  }
  return finish(n, std::move(cs));
}

/// Alpha-acyclic by construction: each new clause takes a proper subset of an
/// existing clause plus at least one fresh variable (running intersection).
inline MonotoneCnf acyclic(Rng& rng, int n, int max_size = 4) {
  std::vector<Clause> cs;
  int next = 1;
  Clause first(n);
  int s0 = std::min(n, rng.uniform(1, max_size));
  for (int k = 0; k < s0; ++k) first.insert(next++);
  cs.push_back(first);
  while (next <= n) {
    const Clause& base = cs[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(cs.size()) - 1))];
    std::vector<int> bv = base.to_vector();
    rng.shuffle(bv);
    int keep = rng.uniform(0, static_cast<int>(bv.size()) - 1);
    Clause c(n);
    for (int k = 0; k < keep; ++k) c.insert(bv[static_cast<std::size_t>(k)]);
    int fresh = std::min(n - next + 1, rng.uniform(1, std::max(1, max_size - keep)));
    for (int k = 0; k < fresh; ++k) c.insert(next++);
    cs.push_back(std::move(c));
  }
  return finish(n, std::move(cs));
}

/// Random clauses of size at most k.
inline MonotoneCnf k_cnf(Rng& rng, int n, int m, int k) { return random_prime(rng, n, m, 1, k); }

}  // namespace mdual::gen
