#pragma once

// Fredman-Khachiyan duality testing: algorithm A, algorithm B with the
// chi-threshold rules, witnesses, and seq* certificates (encode/replay).
//
// Internally a pair is a node (P, Q, U): two clause families over the live
// universe U. A set S of variables (the ones of an assignment) witnesses
// non-duality iff  [S is a transversal of P] != [S contains an edge of Q].
// Swapping P and Q complements the witness within U.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mdual/cnf.hpp"

namespace mdual::fk {

using BigInt = boost::multiprecision::cpp_int;

/// Clause family that, unlike MonotoneCnf, may hold the empty clause ({∅} is
/// constant 0, {} is constant 1).
using Family = std::vector<VarSet>;

inline Family minimize_family(Family f) {
  std::stable_sort(f.begin(), f.end(), [](const VarSet& a, const VarSet& b) { return a.size() < b.size(); });
  Family out;
  for (auto& c : f)
    if (std::none_of(out.begin(), out.end(), [&](const VarSet& d) { return d.is_subset_of(c); })) out.push_back(std::move(c));
  return out;
}

inline bool is_transversal(const Family& p, const VarSet& s) {
  return std::all_of(p.begin(), p.end(), [&](const VarSet& c) { return c.intersects(s); });
}

inline bool contains_edge(const Family& q, const VarSet& s) {
  return std::any_of(q.begin(), q.end(), [&](const VarSet& e) { return e.is_subset_of(s); });
}

inline VarSet vars_of(const Family& f, int n) {
  VarSet v(n);
  for (const auto& c : f) v |= c;
  return v;
}

struct Node {
  Family p, q;
  VarSet u;

  std::size_t volume() const { return p.size() * q.size(); }
  Node swapped() const { return Node{q, p, u}; }
  bool witnessed_by(const VarSet& s) const { return is_transversal(p, s) != contains_edge(q, s); }
  VarSet complement(const VarSet& s) const {
    VarSet r = u;
    r -= s;
    return r;
  }
  friend bool operator==(const Node&, const Node&) = default;
};

struct DualPair {
  MonotoneCnf phi, psi;

  DualPair(MonotoneCnf f, MonotoneCnf g) : phi(minimize(f)), psi(minimize(g)) {
    if (phi.n() != psi.n()) throw cnf_error("pair members have different universe sizes");
  }

  int n() const { return phi.n(); }
  std::size_t volume() const { return phi.size() * psi.size(); }

  Node root() const { return Node{phi.clauses(), psi.clauses(), VarSet::full(phi.n())}; }

  /// evaluate(phi, w) == evaluate(psi, complement(w)), i.e. f(w) != g^d(w).
  bool is_witness(const Assignment& w) const { return evaluate(phi, w) == evaluate(psi, w.complement()); }
};

// ------------------------------------------------------------------------ chi

/// Solution of x^x = v (x >= 1) by bisection on x ln x = ln v.
inline double chi(double v) {
  if (v < 1) throw std::domain_error("chi needs v >= 1");
  if (v == 1) return 1;
  double target = std::log(v), lo = 1, hi = 2;
  while (hi * std::log(hi) < target) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    double mid = (lo + hi) / 2;
    (mid * std::log(mid) < target ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

inline double epsilon_of(double v) { return 1 / chi(v); }

/// Exact test of  occ / size <= 1 / chi(v),  i.e.  v^occ * occ^size <= size^size.
inline bool frequency_at_most_epsilon(std::size_t occ, std::size_t size, std::size_t v) {
  if (occ == 0) return true;
  using boost::multiprecision::pow;
  BigInt lhs = pow(BigInt(v), static_cast<unsigned>(occ)) * pow(BigInt(occ), static_cast<unsigned>(size));
  return lhs <= pow(BigInt(size), static_cast<unsigned>(size));
}

// ------------------------------------------------------- leaf-level witnesses

namespace detail {

inline std::size_t occurrences(const Family& f, int x) {
  return static_cast<std::size_t>(std::count_if(f.begin(), f.end(), [x](const VarSet& c) { return c.contains(x); }));
}

inline std::optional<VarSet> via_swap(const Node& node, std::optional<VarSet> (*fn)(const Node&)) {
  if (auto s = fn(node.swapped())) return node.complement(*s);
  return std::nullopt;
}

// Scans Q in the outer loop.
inline std::optional<VarSet> intersection_witness(const Node& node) {
  for (const auto& e : node.q)
    for (const auto& c : node.p)
      if (!c.intersects(e)) return node.complement(c);
  return std::nullopt;
}

// y in V(P) \ V(Q), y in c:  S = (U \ c) + y.
inline std::optional<VarSet> one_sided_variable(const Node& node) {
  int n = node.u.max() + 1;
  VarSet only = vars_of(node.p, n);
  only -= vars_of(node.q, n);
  if (only.empty()) return std::nullopt;
  int y = only.min();
  for (const auto& c : node.p) {
    if (!c.contains(y)) continue;
    VarSet s = node.complement(c);
    s.insert(y);
    return s;
  }
  return std::nullopt;
}

inline std::optional<VarSet> variable_witness(const Node& node) {
  if (auto s = one_sided_variable(node)) return s;
  return via_swap(node, one_sided_variable);
}

// |c| > |Q|: a hitting set K of Q inside c misses part of c; S = U \ K.
inline std::optional<VarSet> long_clause(const Node& node) {
  for (const auto& c : node.p) {
    if (static_cast<std::size_t>(c.size()) <= node.q.size()) continue;
    VarSet k(node.u.max() + 1);
    for (const auto& e : node.q) {
      VarSet hit = e;
      hit &= c;
      if (hit.empty()) return std::nullopt;  // intersection property broken
      k.insert(hit.min());
    }
    return node.complement(k);
  }
  return std::nullopt;
}

inline std::optional<VarSet> size_witness(const Node& node) {
  if (auto s = long_clause(node)) return s;
  return via_swap(node, long_clause);
}

inline bool weight_condition(const Node& node) {
  int top = 0;
  for (const auto& f : {&node.p, &node.q})
    for (const auto& c : *f) top = std::max(top, c.size());
  BigInt sum = 0;
  for (const auto& f : {&node.p, &node.q})
    for (const auto& c : *f) sum += BigInt(1) << (top - c.size());
  return sum >= (BigInt(1) << top);
}

// Sum of 2^-|c| < 1: derandomized union bound. A P-clause is bad if it lies in
// the zeros, a Q-edge is bad if it lies in the ones.
inline std::optional<VarSet> weight_witness(const Node& node) {
  if (weight_condition(node)) return std::nullopt;
  int n = node.u.max() + 1;
  VarSet ones(n), zeros(n);
  int top = 0;
  for (const auto& f : {&node.p, &node.q})
    for (const auto& c : *f) top = std::max(top, c.size());
  auto badness = [&]() {
    BigInt sum = 0;
    for (const auto& c : node.p) {
      if (c.intersects(ones)) continue;
      VarSet free = c;
      free -= zeros;
      sum += BigInt(1) << (top - free.size());
    }
    for (const auto& e : node.q) {
      if (e.intersects(zeros)) continue;
      VarSet free = e;
      free -= ones;
      sum += BigInt(1) << (top - free.size());
    }
    return sum;
  };
  node.u.for_each([&](int v) {
    ones.insert(v);
    BigInt with_one = badness();
    ones.erase(v);
    zeros.insert(v);
    BigInt with_zero = badness();
    if (with_one <= with_zero) {
      zeros.erase(v);
      ones.insert(v);
    }
  });
  return ones;
}

// Minimal transversals of a family with at most two clauses.
inline Family small_transversals(const Family& f, int n) {
  if (f.empty()) return {VarSet(n)};
  for (const auto& c : f)
    if (c.empty()) return {};
  if (f.size() == 1) {
    Family out;
    f[0].for_each([&](int v) { out.push_back(VarSet(n, {v})); });
    return out;
  }
  Family out;
  VarSet both = f[0];
  both &= f[1];
  both.for_each([&](int v) { out.push_back(VarSet(n, {v})); });
  VarSet a = f[0], b = f[1];
  a -= f[1];
  b -= f[0];
  a.for_each([&](int x) { b.for_each([&](int y) { out.push_back(VarSet(n, {x, y})); }); });
  return out;
}

// Exact decision when |P| <= 2: compare Tr(P) with Q.
inline std::optional<VarSet> expand_small_p(const Node& node) {
  int n = node.u.max() + 1;
  Family tr = small_transversals(node.p, n);
  auto in = [](const Family& f, const VarSet& s) { return std::find(f.begin(), f.end(), s) != f.end(); };
  auto from_transversal = [&](const VarSet& t) -> VarSet {
    for (const auto& e : node.q)
      if (e.is_subset_of(t)) return e;  // proper subset of a minimal transversal
    return t;
  };
  for (const auto& t : tr)
    if (!in(node.q, t)) return from_transversal(t);
  for (const auto& e : node.q) {
    if (in(tr, e)) continue;
    if (!is_transversal(node.p, e)) return e;
    for (const auto& t : tr)
      if (t.is_subset_of(e)) return from_transversal(t);
  }
  return std::nullopt;
}

inline std::optional<VarSet> small_side_test(const Node& node) {
  if (node.p.size() <= 2) return expand_small_p(node);
  return via_swap(node, expand_small_p);
}

inline void verify(const Node& node, const VarSet& s) {
  if (!node.witnessed_by(s)) throw std::logic_error("witness failed verification");
}

// Lift a child witness; if the formula fails, try toggling the split variable.
inline VarSet checked_lift(const Node& parent, VarSet s, int x) {
  if (parent.witnessed_by(s)) return s;
  if (s.contains(x))
    s.erase(x);
  else
    s.insert(x);
  verify(parent, s);
  return s;
}

struct Split {
  int x = 0;
  bool on_q = false;  // max frequency sits on the Q side
};

// Variable maximising max(freq in P, freq in Q); ties by smallest index.
inline Split choose_split(const Node& node) {
  Split best;
  std::size_t num = 0, den = 1;
  node.u.for_each([&](int x) {
    std::size_t op = occurrences(node.p, x), oq = occurrences(node.q, x);
    if (op == 0 && oq == 0) return;
    // op/|P| vs oq/|Q|
    bool q_wins = op * node.q.size() < oq * node.p.size();
    std::size_t cn = q_wins ? oq : op, cd = q_wins ? node.q.size() : node.p.size();
    if (best.x == 0 || cn * den > num * cd) {
      best = Split{x, q_wins};
      num = cn;
      den = cd;
    }
  });
  return best;
}

inline Family without(const Family& f, int x, bool keep_containing) {
  Family out;
  for (const auto& c : f) {
    if (c.contains(x) != keep_containing) continue;
    VarSet d = c;
    d.erase(x);
    out.push_back(std::move(d));
  }
  return out;
}

inline Family join(Family a, const Family& b) {
  a.insert(a.end(), b.begin(), b.end());
  return minimize_family(std::move(a));
}

inline VarSet minus(const VarSet& u, int x) {
  VarSet r = u;
  r.erase(x);
  return r;
}

// (P1, Q0 v Q1): the branch x = 1.
inline Node child_a1(const Node& node, int x) {
  return Node{without(node.p, x, false), join(without(node.q, x, true), without(node.q, x, false)), minus(node.u, x)};
}

// (Q1, P0 v P1): the branch x = 0, stored swapped.
inline Node child_a2(const Node& node, int x) {
  return Node{without(node.q, x, false), join(without(node.p, x, true), without(node.p, x, false)), minus(node.u, x)};
}

inline VarSet lift_a1(const Node& node, const VarSet& t, int x) {
  VarSet s = t;
  s.insert(x);
  return checked_lift(node, s, x);
}

inline VarSet lift_a2(const Node& node, const VarSet& t, int x) {
  VarSet s = minus(node.u, x);
  s -= t;
  return checked_lift(node, s, x);
}

// j-th (1-based) b-child for the orientation (P, Q): fixes the j-th clause e of
// Q0 to ones and x to zero.
inline Node child_b(const Node& node, int x, std::size_t j) {
  Family q0 = without(node.q, x, true);
  const VarSet& e = q0.at(j - 1);
  Family pj, qj;
  for (const auto& c : without(node.p, x, true))
    if (!c.intersects(e)) pj.push_back(c);
  for (const auto& d : without(node.q, x, false)) {
    VarSet r = d;
    r -= e;
    qj.push_back(std::move(r));
  }
  VarSet u = minus(node.u, x);
  u -= e;
  return Node{minimize_family(std::move(pj)), minimize_family(std::move(qj)), std::move(u)};
}

inline VarSet lift_b(const Node& node, const VarSet& r, int x, std::size_t j) {
  VarSet s = without(node.q, x, true).at(j - 1);
  s |= r;
  s.erase(x);
  return checked_lift(node, s, x);
}

}  // namespace detail

inline Node normalized(Node node) {
  node.p = minimize_family(std::move(node.p));
  node.q = minimize_family(std::move(node.q));
  return node;
}

/// Disjoint clauses c in phi, c' in psi give w = 0 exactly on V(c).
inline std::optional<Assignment> precheck_intersections(const DualPair& pair) {
  if (auto s = detail::intersection_witness(pair.root())) return Assignment::from_set(*s, pair.n());
  return std::nullopt;
}

/// Algorithm A pre-split checks: shared variables, clause sizes against the other
/// side, and the weight sum. A failing check yields a witness.
inline std::optional<VarSet> conditions_A(const Node& node) {
  for (auto fn : {detail::variable_witness, detail::size_witness, detail::weight_witness}) {
    if (auto s = fn(node)) {
      detail::verify(node, *s);
      return s;
    }
  }
  return std::nullopt;
}

inline std::optional<Assignment> check_conditions_A(const DualPair& pair) {
  if (auto s = conditions_A(pair.root())) return Assignment::from_set(*s, pair.n());
  return std::nullopt;
}

struct DualResult {
  bool dual = true;
  std::optional<Assignment> witness;
};

// ------------------------------------------------------------------ algorithm A

struct AStats {
  std::size_t nodes = 0;
  std::size_t max_left = 0;   // high-frequency moves (A.1) on one path
  std::size_t max_right = 0;  // A.2 moves on one path
  std::size_t low_frequency_splits = 0;  // split frequency below 1/log2(|P|+|Q|)
};

namespace detail {

inline std::optional<VarSet> run_a(Node node, AStats& st, std::size_t left, std::size_t right) {
  node = normalized(std::move(node));
  ++st.nodes;
  st.max_left = std::max(st.max_left, left);
  st.max_right = std::max(st.max_right, right);
  if (auto s = intersection_witness(node)) return s;
  if (auto s = conditions_A(node)) return s;
  if (node.volume() <= 1) {
    auto s = small_side_test(node);
    if (s) verify(node, *s);
    return s;
  }
  Split sp = choose_split(node);
  if (sp.on_q) {
    auto s = run_a(node.swapped(), st, left, right);
    if (s) return node.complement(*s);
    return s;
  }
  double m = static_cast<double>(node.p.size() + node.q.size());
  if (static_cast<double>(occurrences(node.p, sp.x)) < static_cast<double>(node.p.size()) / std::log2(m))
    ++st.low_frequency_splits;
  if (auto t = run_a(child_a1(node, sp.x), st, left + 1, right)) return lift_a1(node, *t, sp.x);
  if (auto t = run_a(child_a2(node, sp.x), st, left, right + 1)) return lift_a2(node, *t, sp.x);
  return std::nullopt;
}

}  // namespace detail

inline DualResult check_dual_A(const DualPair& pair, AStats* stats = nullptr) {
  AStats st;
  auto s = detail::run_a(pair.root(), st, 0, 0);
  if (stats) *stats = st;
  if (!s) return {};
  Assignment w = Assignment::from_set(*s, pair.n());
  if (!pair.is_witness(w)) throw std::logic_error("algorithm A produced an invalid witness");
  return DualResult{false, w};
}

// ------------------------------------------------------------------ algorithm B

/// Leaf iff one of: V(P) != V(Q); a clause longer than the other side's size;
/// min(|P|, |Q|) <= 2.
inline bool lcheck_B(const Node& raw) {
  Node node = normalized(raw);
  if (std::min(node.p.size(), node.q.size()) <= 2) return true;
  int n = node.u.max() + 1;
  if (!(vars_of(node.p, n) == vars_of(node.q, n))) return true;
  for (const auto& c : node.p)
    if (static_cast<std::size_t>(c.size()) > node.q.size()) return true;
  for (const auto& c : node.q)
    if (static_cast<std::size_t>(c.size()) > node.p.size()) return true;
  return false;
}

/// Exact decision at a leaf; returns a witness set when the pair is not dual.
inline std::optional<VarSet> leaf_test_B(const Node& raw) {
  Node node = normalized(raw);
  std::optional<VarSet> s = detail::intersection_witness(node);
  if (!s && std::min(node.p.size(), node.q.size()) <= 2) return [&] {
    auto r = detail::small_side_test(node);
    if (r) detail::verify(node, *r);
    return r;
  }();
  if (!s) s = detail::variable_witness(node);
  if (!s) s = detail::size_witness(node);
  if (!s) throw std::logic_error("leaf test called on a non-leaf pair");
  detail::verify(node, *s);
  return s;
}

enum class Rule { i, ii, iii };

struct Move {
  enum class Kind { a, b, c0, c1 };
  Kind kind;
  std::size_t j = 0;  // b only, 1-based
  friend bool operator==(const Move&, const Move&) = default;
};

struct Decomposition {
  Rule rule;
  int x;
  std::size_t b_count;  // number of b-children (rules i and ii)
};

inline Decomposition decompose(const Node& node) {
  auto sp = detail::choose_split(node);
  std::size_t v = node.volume();
  std::size_t op = detail::occurrences(node.p, sp.x), oq = detail::occurrences(node.q, sp.x);
  if (frequency_at_most_epsilon(op, node.p.size(), v)) return {Rule::i, sp.x, oq};
  if (frequency_at_most_epsilon(oq, node.q.size(), v)) return {Rule::ii, sp.x, op};
  return {Rule::iii, sp.x, 0};
}

/// Child of a normalized non-leaf node along a move.
inline Node child(const Node& node, const Decomposition& d, const Move& m) {
  switch (m.kind) {
    case Move::Kind::a:
      return d.rule == Rule::i ? detail::child_a1(node, d.x) : detail::child_a2(node, d.x);
    case Move::Kind::b:
      return d.rule == Rule::i ? detail::child_b(node, d.x, m.j) : detail::child_b(node.swapped(), d.x, m.j);
    case Move::Kind::c0:
      return detail::child_a1(node, d.x);
    case Move::Kind::c1:
      return detail::child_a2(node, d.x);
  }
  throw std::logic_error("bad move");
}

inline VarSet lift(const Node& node, const Decomposition& d, const Move& m, const VarSet& s) {
  switch (m.kind) {
    case Move::Kind::a:
      return d.rule == Rule::i ? detail::lift_a1(node, s, d.x) : detail::lift_a2(node, s, d.x);
    case Move::Kind::b:
      if (d.rule == Rule::i) return detail::lift_b(node, s, d.x, m.j);
      return detail::checked_lift(node, node.complement(detail::lift_b(node.swapped(), s, d.x, m.j)), d.x);
    case Move::Kind::c0:
      return detail::lift_a1(node, s, d.x);
    case Move::Kind::c1:
      return detail::lift_a2(node, s, d.x);
  }
  throw std::logic_error("bad move");
}

// ---------------------------------------------------------------- certificate

struct AcBlock {
  std::uint64_t alpha = 0;
  std::vector<bool> gamma;  // false = c0, true = c1
  friend bool operator==(const AcBlock&, const AcBlock&) = default;
};

/// seq*(u): ac-blocks[0], then (j_k, ac-blocks[k]) for k >= 1.
struct Certificate {
  std::size_t v_star = 0;
  std::vector<AcBlock> ac{AcBlock{}};
  std::vector<std::size_t> b;  // 1-based j-labels; b.size() == ac.size() - 1

  std::size_t bit_length() const {
    std::size_t bits = 0;
    for (const auto& blk : ac) bits += std::max<std::size_t>(1, static_cast<std::size_t>(std::bit_width(blk.alpha))) + blk.gamma.size();
    std::size_t jbits = v_star <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(v_star - 1));
    return bits + b.size() * jbits;
  }

  bool well_formed() const { return !ac.empty() && b.size() + 1 == ac.size(); }

  static Certificate from_moves(std::size_t v_star, const std::vector<Move>& moves) {
    Certificate c;
    c.v_star = v_star;
    for (const auto& m : moves) {
      switch (m.kind) {
        case Move::Kind::a:
          ++c.ac.back().alpha;
          break;
        case Move::Kind::c0:
        case Move::Kind::c1:
          c.ac.back().gamma.push_back(m.kind == Move::Kind::c1);
          break;
        case Move::Kind::b:
          c.b.push_back(m.j);
          c.ac.emplace_back();
          break;
      }
    }
    return c;
  }

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct BStats {
  std::size_t nodes = 0;
  std::size_t leaves = 0;
  std::size_t max_a = 0, max_b = 0, max_c = 0;  // per explored path
  std::size_t volume_violations = 0;
};

struct PathStep {
  Move move;
  Node label;  // normalized label of the node reached
};

struct BResult {
  bool dual = true;
  std::optional<Assignment> witness;
  std::optional<Certificate> certificate;
  std::vector<PathStep> path;  // root to failing leaf
  BStats stats;
};

namespace detail {

struct BRun {
  std::size_t v_star;
  double shrink;  // 1 - 1/chi(v*)
  BStats st;
  std::vector<PathStep> path;
  std::vector<Move> moves;

  // terminal: the root may fail the intersection precheck; everything below inherits it.
  std::optional<VarSet> dfs(const Node& node, std::size_t a, std::size_t b, std::size_t c) {
    ++st.nodes;
    st.max_a = std::max(st.max_a, a);
    st.max_b = std::max(st.max_b, b);
    st.max_c = std::max(st.max_c, c);
    if (intersection_witness(node) || lcheck_B(node)) {
      ++st.leaves;
      return leaf_test_B(node);
    }
    auto d = decompose(node);
    auto visit = [&](const Move& m) -> std::optional<VarSet> {
      Node ch = normalized(child(node, d, m));
      check_volume(node, ch, m);
      moves.push_back(m);
      path.push_back(PathStep{m, ch});
      auto s = dfs(ch, a + (m.kind == Move::Kind::a), b + (m.kind == Move::Kind::b),
                   c + (m.kind == Move::Kind::c0 || m.kind == Move::Kind::c1));
      if (s) return lift(node, d, m, *s);
      moves.pop_back();
      path.pop_back();
      return std::nullopt;
    };
    if (d.rule == Rule::iii) {
      if (auto s = visit(Move{Move::Kind::c0})) return s;
      return visit(Move{Move::Kind::c1});
    }
    if (auto s = visit(Move{Move::Kind::a})) return s;
    for (std::size_t j = 1; j <= d.b_count; ++j)
      if (auto s = visit(Move{Move::Kind::b, j})) return s;
    return std::nullopt;
  }

  void check_volume(const Node& parent, const Node& ch, const Move& m) {
    double pv = static_cast<double>(parent.volume()), cv = static_cast<double>(ch.volume());
    bool ok = true;
    if (m.kind == Move::Kind::a) ok = cv < pv;
    if (m.kind == Move::Kind::b) ok = 2 * cv < pv;
    if (m.kind == Move::Kind::c0 || m.kind == Move::Kind::c1) ok = cv <= shrink * pv + 1e-9;
    if (!ok) ++st.volume_violations;
  }
};

}  // namespace detail

inline BResult check_dual_B(const DualPair& pair) {
  Node root = normalized(pair.root());
  detail::BRun run{pair.volume(), 1 - 1 / chi(static_cast<double>(std::max<std::size_t>(pair.volume(), 1))), {}, {}, {}};
  auto s = run.dfs(root, 0, 0, 0);
  BResult r;
  r.stats = run.st;
  if (!s) return r;
  detail::verify(root, *s);
  r.dual = false;
  r.witness = Assignment::from_set(*s, pair.n());
  if (!pair.is_witness(*r.witness)) throw std::logic_error("algorithm B produced an invalid witness");
  r.certificate = Certificate::from_moves(pair.volume(), run.moves);
  r.path = std::move(run.path);
  return r;
}

enum class ReplayOutcome { confirmed, invalid, refuted };

struct ReplayResult {
  ReplayOutcome outcome = ReplayOutcome::invalid;
  std::optional<Assignment> witness;
  std::vector<PathStep> path;
  std::string reason;
};

/// Re-derives the path named by a certificate and tests its leaf.
inline ReplayResult replay_certificate(const DualPair& pair, const Certificate& cert) {
  ReplayResult r;
  auto fail = [&](std::string why) {
    r.outcome = ReplayOutcome::invalid;
    r.reason = std::move(why);
    r.path.clear();
    return r;
  };
  if (!cert.well_formed()) return fail("malformed block structure");
  if (cert.v_star != pair.volume()) return fail("volume does not match the pair");
  std::vector<Node> nodes{normalized(pair.root())};
  std::vector<Decomposition> decs;
  std::vector<Move> moves;
  auto terminal = [](const Node& n) { return detail::intersection_witness(n).has_value() || lcheck_B(n); };
  auto step = [&](const Decomposition& d, const Move& m) {
    decs.push_back(d);
    moves.push_back(m);
    nodes.push_back(normalized(child(nodes.back(), d, m)));
    r.path.push_back(PathStep{m, nodes.back()});
  };
  for (std::size_t blk = 0; blk < cert.ac.size(); ++blk) {
    if (blk > 0) {
      if (terminal(nodes.back())) return fail("b-label at a leaf");
      auto d = decompose(nodes.back());
      std::size_t j = cert.b[blk - 1];
      if (d.rule == Rule::iii) return fail("b-label where rule (iii) applies");
      if (j < 1 || j > d.b_count) return fail("j-label out of range");
      step(d, Move{Move::Kind::b, j});
    }
    const auto& ac = cert.ac[blk];
    std::uint64_t p = 0;
    std::size_t q = 0;
    while (p < ac.alpha || q < ac.gamma.size()) {
      if (terminal(nodes.back())) return fail("path reaches a leaf early");
      auto d = decompose(nodes.back());
      if (d.rule != Rule::iii && p < ac.alpha) {
        ++p;
        step(d, Move{Move::Kind::a});
      } else if (d.rule == Rule::iii && q < ac.gamma.size()) {
        step(d, Move{ac.gamma[q++] ? Move::Kind::c1 : Move::Kind::c0});
      } else {
        return fail("label does not match the rule applied");
      }
    }
  }
  if (!terminal(nodes.back())) return fail("path ends at an inner node");
  auto s = leaf_test_B(nodes.back());
  if (!s) {
    r.outcome = ReplayOutcome::refuted;
    r.reason = "leaf pair is dual";
    return r;
  }
  VarSet w = *s;
  for (std::size_t k = moves.size(); k-- > 0;) w = lift(nodes[k], decs[k], moves[k], w);
  detail::verify(nodes.front(), w);
  r.outcome = ReplayOutcome::confirmed;
  r.witness = Assignment::from_set(w, pair.n());
  if (!pair.is_witness(*r.witness)) throw std::logic_error("replayed witness failed verification");
  return r;
}

}  // namespace mdual::fk
