#pragma once

#include <algorithm>
#include <ostream>
#include <set>
#include <vector>

#include "mdual/cnf.hpp"

namespace mdual {

inline void PrintTo(const VarSet& s, std::ostream* os) {
  *os << "{";
  bool first = true;
  s.for_each([&](int v) {
    *os << (first ? "" : " ") << v;
    first = false;
  });
  *os << "}";
}

}  // namespace mdual

namespace mdual::test {

inline MonotoneCnf cnf(int n, std::vector<std::vector<int>> clauses) { return MonotoneCnf(n, clauses); }

inline Term term(int n, std::initializer_list<int> vars) { return Term(n, vars); }

/// (x1 v x2)(x1 v x3)(x2 v x3 v x4)(x1 v x4)
inline MonotoneCnf four_clause() { return cnf(4, {{1, 2}, {1, 3}, {2, 3, 4}, {1, 4}}); }

/// x2 (x1 v x3)(x1 v x4)
inline MonotoneCnf prime_example() { return cnf(4, {{2}, {1, 3}, {1, 4}}); }

/// c1..c4 of the acyclic example.
inline MonotoneCnf acyclic_example() { return cnf(6, {{1, 2, 3}, {1, 3, 5}, {1, 5, 6}, {3, 4, 5}}); }

inline MonotoneCnf triangle() { return cnf(3, {{1, 2}, {2, 3}, {1, 3}}); }

inline std::set<std::vector<int>> as_set(const std::vector<Term>& ts) {
  std::set<std::vector<int>> s;
  for (const auto& t : ts) s.insert(t.to_vector());
  return s;
}

inline std::vector<std::vector<int>> as_lists(const std::vector<Term>& ts) {
  std::vector<std::vector<int>> out;
  for (const auto& t : ts) out.push_back(t.to_vector());
  return out;
}

}  // namespace mdual::test
