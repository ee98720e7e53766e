#pragma once

// Structural classes that make DUALIZE polynomial-delay: degeneracy,
// read-number, GYO reduction, and tree decompositions of the incidence graph.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdual/cnf.hpp"

namespace mdual {

class td_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------- degeneracy

/// |Delta^i| for i = 1..n (index 0 of the result is position 1).
inline std::vector<int> delta_profile(const MonotoneCnf& cnf, const VariableOrdering& ord) {
  std::vector<int> prof(static_cast<std::size_t>(cnf.n()), 0);
  for (const auto& c : cnf.clauses()) ++prof[static_cast<std::size_t>(last_position(c, ord) - 1)];
  return prof;
}

inline int max_delta(const MonotoneCnf& cnf, const VariableOrdering& ord) {
  auto p = delta_profile(cnf, ord);
  return p.empty() ? 0 : *std::max_element(p.begin(), p.end());
}

struct DegeneracyReport {
  VariableOrdering ord;
  int k = 0;
  std::vector<int> profile;
};

/// Fills positions n, n-1, ..., 1; each time picks the remaining variable that
/// closes the fewest clauses lying entirely inside the remaining set.
inline DegeneracyReport smallest_last_ordering(const MonotoneCnf& cnf) {
  int n = cnf.n();
  const auto& cs = cnf.clauses();
  std::vector<std::vector<std::size_t>> occ(static_cast<std::size_t>(n) + 1);
  for (std::size_t j = 0; j < cs.size(); ++j) cs[j].for_each([&](int v) { occ[static_cast<std::size_t>(v)].push_back(j); });
  std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 1; v <= n; ++v) deg[static_cast<std::size_t>(v)] = static_cast<int>(occ[static_cast<std::size_t>(v)].size());
  std::vector<char> inside(cs.size(), 1), gone(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> order(static_cast<std::size_t>(n), 0);
  for (int p = n; p >= 1; --p) {
    int best = 0;
    for (int v = 1; v <= n; ++v)
      if (!gone[static_cast<std::size_t>(v)] && (best == 0 || deg[static_cast<std::size_t>(v)] < deg[static_cast<std::size_t>(best)]))
        best = v;
    order[static_cast<std::size_t>(p - 1)] = best;
    gone[static_cast<std::size_t>(best)] = 1;
    for (std::size_t j : occ[static_cast<std::size_t>(best)]) {
      if (!inside[j]) continue;
      inside[j] = 0;
      cs[j].for_each([&](int u) { --deg[static_cast<std::size_t>(u)]; });
    }
  }
  DegeneracyReport r;
  r.ord = VariableOrdering(std::move(order));
  r.profile = delta_profile(cnf, r.ord);
  r.k = r.profile.empty() ? 0 : *std::max_element(r.profile.begin(), r.profile.end());
  return r;
}

/// Largest number of clauses any single variable occurs in.
inline int read_number(const MonotoneCnf& cnf) {
  std::vector<int> cnt(static_cast<std::size_t>(cnf.n()) + 1, 0);
  int r = 0;
  for (const auto& c : cnf.clauses()) c.for_each([&](int v) { r = std::max(r, ++cnt[static_cast<std::size_t>(v)]); });
  return r;
}

// ----------------------------------------------------------------------- GYO

struct GyoEvent {
  enum class Kind { remove_variable, remove_clause };
  Kind kind;
  int var = 0;      // remove_variable
  int clause = -1;  // 0-based clause index (input order); -1 = unspecified on replay
  int by = -1;      // remove_clause: index of a superset clause; -1 = unspecified

  static GyoEvent variable(int v, int from = -1) { return {Kind::remove_variable, v, from, -1}; }
  static GyoEvent clause_removed(int c, int by = -1) { return {Kind::remove_clause, 0, c, by}; }
  bool operator==(const GyoEvent&) const = default;
};

struct GyoTrace {
  std::vector<GyoEvent> steps;
  bool success = false;
};

namespace detail {

struct GyoState {
  std::vector<VarSet> cur;
  std::vector<char> alive;

  explicit GyoState(const MonotoneCnf& cnf) : cur(cnf.clauses()), alive(cnf.size(), 1) {}

  int alive_count() const { return static_cast<int>(std::count(alive.begin(), alive.end(), 1)); }

  // -1 when v is in zero or several alive clauses.
  int sole_clause(int v) const {
    int hit = -1;
    for (std::size_t j = 0; j < cur.size(); ++j) {
      if (!alive[j] || !cur[j].contains(v)) continue;
      if (hit >= 0) return -1;
      hit = static_cast<int>(j);
    }
    return hit;
  }

  int superset_of(int c) const {
    for (std::size_t j = 0; j < cur.size(); ++j)
      if (alive[j] && static_cast<int>(j) != c && cur[static_cast<std::size_t>(c)].is_subset_of(cur[j])) return static_cast<int>(j);
    return -1;
  }
};

}  // namespace detail

/// Deterministic schedule: rule (1) on the lowest eligible variable, else rule
/// (2) on the first subsumed clause (input order). Quadratic, not linear.
inline GyoTrace gyo_reduce(const MonotoneCnf& cnf) {
  detail::GyoState st(cnf);
  GyoTrace tr;
  for (;;) {
    bool moved = false;
    for (int v = 1; v <= cnf.n() && !moved; ++v) {
      int c = st.sole_clause(v);
      if (c < 0) continue;
      st.cur[static_cast<std::size_t>(c)].erase(v);
      tr.steps.push_back(GyoEvent::variable(v, c));
      moved = true;
    }
    for (std::size_t c = 0; c < st.cur.size() && !moved; ++c) {
      if (!st.alive[c]) continue;
      int by = st.superset_of(static_cast<int>(c));
      if (by < 0) continue;
      st.alive[c] = 0;
      tr.steps.push_back(GyoEvent::clause_removed(static_cast<int>(c), by));
      moved = true;
    }
    if (!moved) break;
  }
  tr.success = st.alive_count() <= 1;
  return tr;
}

/// Checks that every step is a legal rule application in sequence and returns
/// whether the replay ends at a single empty clause (or at no clauses).
inline bool replay_gyo(const MonotoneCnf& cnf, const std::vector<GyoEvent>& steps) {
  detail::GyoState st(cnf);
  for (const auto& e : steps) {
    if (e.kind == GyoEvent::Kind::remove_variable) {
      if (e.var < 1 || e.var > cnf.n()) return false;
      int c = st.sole_clause(e.var);
      if (c < 0 || (e.clause >= 0 && e.clause != c)) return false;
      st.cur[static_cast<std::size_t>(c)].erase(e.var);
    } else {
      if (e.clause < 0 || e.clause >= static_cast<int>(st.cur.size()) || !st.alive[static_cast<std::size_t>(e.clause)])
        return false;
      if (e.by >= 0) {
        if (e.by == e.clause || e.by >= static_cast<int>(st.cur.size()) || !st.alive[static_cast<std::size_t>(e.by)] ||
            !st.cur[static_cast<std::size_t>(e.clause)].is_subset_of(st.cur[static_cast<std::size_t>(e.by)]))
          return false;
      } else if (st.superset_of(e.clause) < 0) {
        return false;
      }
      st.alive[static_cast<std::size_t>(e.clause)] = 0;
    }
  }
  if (st.alive_count() > 1) return false;
  for (std::size_t j = 0; j < st.cur.size(); ++j)
    if (st.alive[j] && !st.cur[j].empty()) return false;
  return true;
}

/// Reversed order of variable removals; variables never removed (unused ones)
/// take the first positions in index order.
inline VariableOrdering ordering_from_gyo(const GyoTrace& trace, int n) {
  if (!trace.success) throw std::invalid_argument("GYO reduction did not succeed");
  std::vector<int> removed;
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : trace.steps) {
    if (e.kind != GyoEvent::Kind::remove_variable) continue;
    if (e.var < 1 || e.var > n || seen[static_cast<std::size_t>(e.var)]) throw std::invalid_argument("malformed GYO trace");
    seen[static_cast<std::size_t>(e.var)] = 1;
    removed.push_back(e.var);
  }
  std::vector<int> order;
  for (int v = 1; v <= n; ++v)
    if (!seen[static_cast<std::size_t>(v)]) order.push_back(v);
  order.insert(order.end(), removed.rbegin(), removed.rend());
  return VariableOrdering(std::move(order));
}

// --------------------------------------------------------- tree decompositions

/// Vertices 1..n are variables; n+1..n+m are the clause vertices y_c.
struct IncidenceGraph {
  int n = 0;
  int m = 0;
  std::vector<std::vector<int>> adj;  // indexed by vertex id, entry 0 unused

  int vertex_count() const { return n + m; }
  int clause_vertex(int c) const { return n + c; }  // c is 1-based
  bool is_clause_vertex(int v) const { return v > n; }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& a : adj) e += a.size();
    return e / 2;
  }
};

inline IncidenceGraph incidence_graph(const MonotoneCnf& cnf) {
  IncidenceGraph g;
  g.n = cnf.n();
  g.m = static_cast<int>(cnf.size());
  g.adj.assign(static_cast<std::size_t>(g.n + g.m) + 1, {});
  for (int c = 1; c <= g.m; ++c) {
    int y = g.clause_vertex(c);
    cnf.clauses()[static_cast<std::size_t>(c - 1)].for_each([&](int v) {
      g.adj[static_cast<std::size_t>(v)].push_back(y);
      g.adj[static_cast<std::size_t>(y)].push_back(v);
    });
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

enum class TdKind { type1, type2 };

/// Clause indices in `clauses` are 1-based, matching input order.
struct Bag {
  VarSet vars;
  VarSet clauses;

  int size() const { return vars.size() + clauses.size(); }
};

struct TreeDecomposition {
  TdKind kind = TdKind::type2;
  std::vector<Bag> bags;
  std::vector<std::pair<int, int>> edges;  // 0-based node ids

  int width() const {
    int w = 0;
    for (const auto& b : bags) w = std::max(w, b.size());
    return w - 1;
  }
};

namespace detail {

inline bool is_tree(const TreeDecomposition& td) {
  auto k = td.bags.size();
  if (k == 0 || td.edges.size() != k - 1) return false;
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : td.edges) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= k || static_cast<std::size_t>(b) >= k) return false;
    auto ra = find(static_cast<std::size_t>(a)), rb = find(static_cast<std::size_t>(b));
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

// In a tree, the nodes holding a vertex are connected iff they span |nodes|-1 edges.
template <typename Has>
bool connected_occurrence(const TreeDecomposition& td, Has has) {
  std::size_t nodes = 0, edges = 0;
  for (std::size_t w = 0; w < td.bags.size(); ++w) nodes += has(td.bags[w]) ? 1 : 0;
  for (auto [a, b] : td.edges)
    if (has(td.bags[static_cast<std::size_t>(a)]) && has(td.bags[static_cast<std::size_t>(b)])) ++edges;
  return nodes == 0 || edges + 1 == nodes;
}

}  // namespace detail

/// The three decomposition conditions, for the kind recorded in td.
inline bool validate_td(const TreeDecomposition& td, const MonotoneCnf& cnf) {
  if (!detail::is_tree(td)) return false;
  int n = cnf.n();
  int m = static_cast<int>(cnf.size());
  VarSet vars(n), clauses(m);
  for (const auto& b : td.bags) {
    if (!b.vars.empty() && (b.vars.min() < 1 || b.vars.max() > n)) return false;
    if (!b.clauses.empty()) {
      if (td.kind == TdKind::type1 || b.clauses.min() < 1 || b.clauses.max() > m) return false;
    }
    vars |= b.vars;
    clauses |= b.clauses;
  }
  if (!cnf.used_variables().is_subset_of(vars)) return false;
  for (int v = 1; v <= n; ++v)
    if (vars.contains(v) && !detail::connected_occurrence(td, [v](const Bag& b) { return b.vars.contains(v); })) return false;
  const auto& cs = cnf.clauses();
  if (td.kind == TdKind::type1) {
    for (const auto& c : cs)
      if (std::none_of(td.bags.begin(), td.bags.end(), [&](const Bag& b) { return c.is_subset_of(b.vars); })) return false;
    return true;
  }
  for (int c = 1; c <= m; ++c) {
    if (!clauses.contains(c)) return false;
    if (!detail::connected_occurrence(td, [c](const Bag& b) { return b.clauses.contains(c); })) return false;
    bool ok = true;
    cs[static_cast<std::size_t>(c - 1)].for_each([&](int v) {
      ok = ok && std::any_of(td.bags.begin(), td.bags.end(),
                             [&](const Bag& b) { return b.vars.contains(v) && b.clauses.contains(c); });
    });
    if (!ok) return false;
  }
  return true;
}

/// Adds y_c to every bag that contains all of V(c).
inline TreeDecomposition td1_to_td2(const TreeDecomposition& td, const MonotoneCnf& cnf) {
  if (td.kind != TdKind::type1 || !validate_td(td, cnf)) throw td_error("input is not a valid type-I tree decomposition");
  TreeDecomposition out = td;
  out.kind = TdKind::type2;
  int m = static_cast<int>(cnf.size());
  for (auto& b : out.bags) {
    b.clauses = VarSet(m);
    for (int c = 1; c <= m; ++c)
      if (cnf.clauses()[static_cast<std::size_t>(c - 1)].is_subset_of(b.vars)) b.clauses.insert(c);
  }
  return out;
}

namespace detail {

struct Elimination {
  std::vector<std::vector<int>> bags;  // eliminated vertex first, then its neighbours
  std::vector<std::pair<int, int>> edges;
};

// Min-fill elimination over vertices 1..N with active[v] set; ties by smallest id.
// Each bag hangs off the bag of its neighbour eliminated next; roots are chained.
inline Elimination min_fill(std::vector<std::set<int>> adj, const std::vector<char>& active) {
  int N = static_cast<int>(adj.size()) - 1;
  auto fill = [&](int v) {
    const auto& nb = adj[static_cast<std::size_t>(v)];
    long f = 0;
    for (auto a = nb.begin(); a != nb.end(); ++a)
      for (auto b = std::next(a); b != nb.end(); ++b)
        if (!adj[static_cast<std::size_t>(*a)].count(*b)) ++f;
    return f;
  };
  std::vector<int> elim_pos(static_cast<std::size_t>(N) + 1, -1);
  Elimination out;
  int remaining = static_cast<int>(std::count(active.begin(), active.end(), 1));
  for (int step = 0; step < remaining; ++step) {
    int best = 0;
    long best_fill = 0;
    for (int v = 1; v <= N; ++v) {
      if (!active[static_cast<std::size_t>(v)] || elim_pos[static_cast<std::size_t>(v)] >= 0) continue;
      long f = fill(v);
      if (best == 0 || f < best_fill) {
        best = v;
        best_fill = f;
      }
    }
    auto nb = adj[static_cast<std::size_t>(best)];
    for (auto a = nb.begin(); a != nb.end(); ++a)
      for (auto b = std::next(a); b != nb.end(); ++b) {
        adj[static_cast<std::size_t>(*a)].insert(*b);
        adj[static_cast<std::size_t>(*b)].insert(*a);
      }
    for (int u : nb) adj[static_cast<std::size_t>(u)].erase(best);
    elim_pos[static_cast<std::size_t>(best)] = step;
    std::vector<int> bv{best};
    bv.insert(bv.end(), nb.begin(), nb.end());
    out.bags.push_back(std::move(bv));
  }
  int last_root = -1;
  for (std::size_t k = 0; k < out.bags.size(); ++k) {
    int parent = -1;
    for (std::size_t j = 1; j < out.bags[k].size(); ++j) {
      int p = elim_pos[static_cast<std::size_t>(out.bags[k][j])];
      if (parent < 0 || p < parent) parent = p;
    }
    if (parent >= 0) {
      out.edges.emplace_back(static_cast<int>(k), parent);
    } else {
      if (last_root >= 0) out.edges.emplace_back(last_root, static_cast<int>(k));
      last_root = static_cast<int>(k);
    }
  }
  return out;
}

}  // namespace detail

/// Min-fill elimination on the incidence graph. Variables without clauses are
/// left out. The result is a valid type-II decomposition.
inline TreeDecomposition heuristic_td(const IncidenceGraph& g) {
  int N = g.vertex_count();
  std::vector<std::set<int>> adj(static_cast<std::size_t>(N) + 1);
  std::vector<char> active(static_cast<std::size_t>(N) + 1, 0);
  for (int v = 1; v <= N; ++v) {
    const auto& a = g.adj[static_cast<std::size_t>(v)];
    adj[static_cast<std::size_t>(v)].insert(a.begin(), a.end());
    active[static_cast<std::size_t>(v)] = g.is_clause_vertex(v) || !a.empty();
  }
  auto el = detail::min_fill(std::move(adj), active);
  TreeDecomposition td;
  td.kind = TdKind::type2;
  td.edges = std::move(el.edges);
  for (const auto& bv : el.bags) {
    Bag b{VarSet(g.n), VarSet(g.m)};
    for (int v : bv) {
      if (g.is_clause_vertex(v))
        b.clauses.insert(v - g.n);
      else
        b.vars.insert(v);
    }
    td.bags.push_back(std::move(b));
  }
  if (td.bags.empty()) td.bags.push_back(Bag{VarSet(g.n), VarSet(g.m)});
  return td;
}

inline TreeDecomposition heuristic_td(const MonotoneCnf& cnf) { return heuristic_td(incidence_graph(cnf)); }

/// Type-I decomposition by min-fill on the primal graph (clauses become cliques).
inline TreeDecomposition heuristic_td1(const MonotoneCnf& cnf) {
  int n = cnf.n();
  std::vector<std::set<int>> adj(static_cast<std::size_t>(n) + 1);
  std::vector<char> active(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& c : cnf.clauses()) {
    auto vs = c.to_vector();
    for (int u : vs) {
      active[static_cast<std::size_t>(u)] = 1;
      for (int v : vs)
        if (u != v) adj[static_cast<std::size_t>(u)].insert(v);
    }
  }
  auto el = detail::min_fill(std::move(adj), active);
  TreeDecomposition td;
  td.kind = TdKind::type1;
  td.edges = std::move(el.edges);
  for (const auto& bv : el.bags) {
    Bag b{VarSet(n), VarSet(0)};
    for (int v : bv) b.vars.insert(v);
    td.bags.push_back(std::move(b));
  }
  if (td.bags.empty()) td.bags.push_back(Bag{VarSet(n), VarSet(0)});
  return td;
}

/// Leaf peeling: repeatedly take the smallest-id leaf; variables private to it
/// go to the last free positions and their clause vertices leave every bag.
/// The resulting profile is checked against 2^width before returning.
inline VariableOrdering ordering_from_td2(const TreeDecomposition& td, const MonotoneCnf& cnf) {
  if (td.kind != TdKind::type2 || !validate_td(td, cnf)) throw td_error("input is not a valid type-II tree decomposition");
  int n = cnf.n();
  auto k = td.bags.size();
  std::vector<Bag> bags = td.bags;
  std::vector<std::set<std::size_t>> nbr(k);
  for (auto [a, b] : td.edges) {
    nbr[static_cast<std::size_t>(a)].insert(static_cast<std::size_t>(b));
    nbr[static_cast<std::size_t>(b)].insert(static_cast<std::size_t>(a));
  }
  std::vector<char> alive(k, 1);
  std::vector<int> order(static_cast<std::size_t>(n), 0);
  VarSet placed(n);
  int i = n;
  for (std::size_t left = k; left > 0;) {
    std::size_t w = 0;
    while (!alive[w] || nbr[w].size() > 1) ++w;
    VarSet priv = bags[w].vars;
    if (!nbr[w].empty()) priv -= bags[*nbr[w].begin()].vars;
    if (priv.empty()) {
      alive[w] = 0;
      for (auto p : nbr[w]) nbr[p].erase(w);
      nbr[w].clear();
      --left;
      continue;
    }
    // The smallest private index takes the last free position.
    std::vector<int> pv = priv.to_vector();
    for (std::size_t h = 0; h < pv.size(); ++h) order[static_cast<std::size_t>(i - 1) - h] = pv[h];
    i -= priv.size();
    placed |= priv;
    bags[w].vars -= priv;
    const auto& cs = cnf.clauses();
    for (std::size_t c = 0; c < cs.size(); ++c) {
      if (!cs[c].intersects(priv)) continue;
      for (auto& b : bags) b.clauses.erase(static_cast<int>(c) + 1);
    }
  }
  int front = 0;
  for (int v = 1; v <= n; ++v)
    if (!placed.contains(v)) order[static_cast<std::size_t>(front++)] = v;
  VariableOrdering ord(std::move(order));
  int w = td.width();
  if (w < 30 && max_delta(cnf, ord) > (1 << std::max(w, 0)))
    throw std::logic_error("tree-decomposition ordering exceeds the 2^width bound");
  return ord;
}

// -------------------------------------------------------------------- analyze

struct Analysis {
  int n = 0;
  std::size_t m = 0;
  std::size_t length = 0;
  int read = 0;
  DegeneracyReport degeneracy;
  GyoTrace gyo;
  std::optional<VariableOrdering> gyo_ordering;
  std::optional<int> td_width;
  std::optional<VariableOrdering> td_ordering;
  VariableOrdering chosen;
  std::string chosen_source;
  int chosen_k = 0;
  std::vector<std::string> guarantees;
};

/// Picks the best ordering on hand and lists which delay guarantees apply.
inline Analysis analyze(const MonotoneCnf& cnf, const std::optional<TreeDecomposition>& td = std::nullopt) {
  Analysis a;
  a.n = cnf.n();
  a.m = cnf.size();
  a.length = cnf.length();
  a.read = read_number(cnf);
  a.degeneracy = smallest_last_ordering(cnf);
  a.gyo = gyo_reduce(cnf);
  a.chosen = a.degeneracy.ord;
  a.chosen_source = "smallest-last";
  a.chosen_k = a.degeneracy.k;
  if (a.gyo.success) {
    a.gyo_ordering = ordering_from_gyo(a.gyo, cnf.n());
    int k = max_delta(cnf, *a.gyo_ordering);
    if (k <= a.chosen_k) {
      a.chosen = *a.gyo_ordering;
      a.chosen_source = "gyo";
      a.chosen_k = k;
    }
  }
  if (td) {
    a.td_width = td->width();
    a.td_ordering = ordering_from_td2(*td, cnf);
  }
  auto k = std::to_string(a.degeneracy.k);
  if (a.gyo.success) a.guarantees.push_back("alpha-acyclic => 1-degenerate: delay O(||phi|| * n^2)");
  a.guarantees.push_back("read-" + std::to_string(a.read) + ": delay O(||phi|| * n^" + std::to_string(a.read + 1) + ")");
  a.guarantees.push_back(k + "-degenerate: delay O(||phi|| * n^" + std::to_string(a.degeneracy.k + 1) + ")");
  if (a.td_width) {
    auto w = std::max(*a.td_width, 0);
    a.guarantees.push_back("tw2 <= " + std::to_string(w) + " => " + (w < 30 ? std::to_string(1L << w) : "2^" + std::to_string(w)) +
                           "-degenerate");
  }
  // Logarithmic degeneracy: polynomial total time via log-clause dualization,
  // which is not implemented here; generic DUALIZE is used instead.
  double logl = std::log2(static_cast<double>(std::max<std::size_t>(a.length, 2)));
  if (a.degeneracy.k > 2 && a.degeneracy.k <= logl)
    a.guarantees.push_back("O(log ||phi||)-degenerate: polynomial total time (log-clause subroutine not implemented)");
  return a;
}

}  // namespace mdual
