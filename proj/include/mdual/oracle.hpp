#pragma once

// Brute-force ground truth. Everything here is deliberately naive and bounded
// by OracleGuard; nothing in the library proper depends on it.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdual/cnf.hpp"

namespace mdual::oracle {

struct OracleGuard {
  int max_n = 20;
  int max_n_factorial = 8;
};

class guard_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace detail {

inline std::uint32_t to_mask(const VarSet& s) {
  std::uint32_t m = 0;
  s.for_each([&](int v) { m |= std::uint32_t{1} << (v - 1); });
  return m;
}

inline VarSet from_mask(std::uint32_t m, int n) {
  VarSet s(n);
  for (int v = 1; v <= n; ++v)
    if (m >> (v - 1) & 1U) s.insert(v);
  return s;
}

inline std::vector<std::uint32_t> masks(const MonotoneCnf& cnf) {
  std::vector<std::uint32_t> out;
  for (const auto& c : cnf.clauses()) out.push_back(to_mask(c));
  return out;
}

inline bool hits_all(std::uint32_t s, const std::vector<std::uint32_t>& cs) {
  return std::all_of(cs.begin(), cs.end(), [&](std::uint32_t c) { return (c & s) != 0; });
}

}  // namespace detail

/// All inclusion-minimal hitting sets, swept by ascending cardinality.
inline std::vector<Term> brute_transversals(const MonotoneCnf& cnf, OracleGuard guard = {}) {
  int n = cnf.n();
  if (n > guard.max_n) throw guard_error("brute_transversals: n=" + std::to_string(n) + " exceeds guard");
  auto cs = detail::masks(cnf);
  std::vector<std::uint32_t> accepted;
  for (int k = 0; k <= n; ++k) {
    std::vector<std::uint32_t> level;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      auto m = static_cast<std::uint32_t>(s);
      if (std::popcount(m) != k) continue;
      if (std::any_of(accepted.begin(), accepted.end(), [&](std::uint32_t a) { return (a & m) == a; })) continue;
      if (detail::hits_all(m, cs)) level.push_back(m);
    }
    accepted.insert(accepted.end(), level.begin(), level.end());
  }
  std::vector<Term> out;
  for (auto m : accepted) out.push_back(detail::from_mask(m, n));
  return out;
}

/// Either "dual" or the first violating vector, scanning w as the integer
/// sum_v w_v 2^{v-1} from 0 upward.
struct BruteDualResult {
  bool dual = true;
  std::optional<Assignment> witness;
};

inline BruteDualResult brute_dual_check(const MonotoneCnf& phi, const MonotoneCnf& psi, OracleGuard guard = {}) {
  int n = std::max(phi.n(), psi.n());
  if (n > guard.max_n) throw guard_error("brute_dual_check: n=" + std::to_string(n) + " exceeds guard");
  auto a = detail::masks(phi);
  auto b = detail::masks(psi);
  std::uint32_t all = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    auto w = static_cast<std::uint32_t>(s);
    bool f = detail::hits_all(w, a);
    bool g_bar = detail::hits_all(all & ~w, b);
    if (f == g_bar) return {false, Assignment::from_set(detail::from_mask(w, n), n)};
  }
  return {true, std::nullopt};
}

/// Degeneracy by exhaustive search over all n! orderings.
inline int brute_degeneracy(const MonotoneCnf& cnf, OracleGuard guard = {}) {
  int n = cnf.n();
  if (n > guard.max_n_factorial) throw guard_error("brute_degeneracy: n=" + std::to_string(n) + " exceeds guard");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  int best = std::numeric_limits<int>::max();
  do {
    std::vector<int> pos(static_cast<std::size_t>(n) + 1);
    for (int p = 0; p < n; ++p) pos[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])] = p + 1;
    std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& c : cnf.clauses()) {
      int last = 0;
      c.for_each([&](int v) { last = std::max(last, pos[static_cast<std::size_t>(v)]); });
      ++count[static_cast<std::size_t>(last)];
    }
    best = std::min(best, *std::max_element(count.begin(), count.end()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return n == 0 ? 0 : best;
}

}  // namespace mdual::oracle
