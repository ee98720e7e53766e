#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mdual/var_set.hpp"

namespace mdual {

/// A positive clause: the disjunction of its variables.
using Clause = VarSet;
/// A positive term: the conjunction of its variables. Empty means constant 1.
using Term = VarSet;
/// Exact term weight sum_{v in t} 2^{n-v}.
using TermKey = boost::multiprecision::cpp_int;

class cnf_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Monotone CNF over variables 1..n. The clause list keeps insertion order so
/// that external references by clause index stay stable; equality is set
/// equality. The empty clause list is the constant 1.
class MonotoneCnf {
 public:
  MonotoneCnf() = default;
  explicit MonotoneCnf(int n) : n_(n) { VarSet::block_count(n); }

  MonotoneCnf(int n, const std::vector<std::vector<int>>& clauses) : MonotoneCnf(n) {
    std::vector<Clause> sets;
    sets.reserve(clauses.size());
    for (const auto& c : clauses) {
      Clause s(n);
      for (int v : c) {
        check_var(v);
        if (s.contains(v)) throw cnf_error("duplicate variable " + std::to_string(v) + " in clause");
        s.insert(v);
      }
      sets.push_back(std::move(s));
    }
    assign(std::move(sets));
  }

  MonotoneCnf(int n, std::vector<Clause> clauses) : MonotoneCnf(n) { assign(std::move(clauses)); }

  int n() const { return n_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(std::size_t j) const { return clauses_.at(j); }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  bool is_constant_one() const { return clauses_.empty(); }

  /// Total literal count.
  std::size_t length() const {
    std::size_t l = 0;
    for (const auto& c : clauses_) l += static_cast<std::size_t>(c.size());
    return l;
  }

  void add_clause(Clause c) {
    validate(c);
    for (const auto& d : clauses_)
      if (d == c) throw cnf_error("duplicate clause");
    clauses_.push_back(std::move(c));
  }

  VarSet used_variables() const {
    VarSet u(n_);
    for (const auto& c : clauses_) u |= c;
    return u;
  }

  bool uses_all_variables() const { return used_variables().size() == n_; }

  friend bool operator==(const MonotoneCnf& a, const MonotoneCnf& b) {
    if (a.n_ != b.n_ || a.clauses_.size() != b.clauses_.size()) return false;
    std::unordered_set<VarSet, VarSetHash> sa(a.clauses_.begin(), a.clauses_.end());
    return std::all_of(b.clauses_.begin(), b.clauses_.end(),
                       [&](const Clause& c) { return sa.count(c) != 0; });
  }

 private:
  void check_var(int v) const {
    if (v < 1 || v > n_) throw cnf_error("variable index " + std::to_string(v) + " outside 1.." + std::to_string(n_));
  }

  void validate(const Clause& c) const {
    if (c.empty()) throw cnf_error("empty clause");
    if (c.max() > n_) throw cnf_error("variable index " + std::to_string(c.max()) + " outside 1.." + std::to_string(n_));
  }

  void assign(std::vector<Clause> clauses) {
    std::unordered_set<VarSet, VarSetHash> seen;
    for (auto& c : clauses) {
      validate(c);
      if (!seen.insert(c).second) throw cnf_error("duplicate clause");
    }
    clauses_ = std::move(clauses);
  }

  int n_ = 0;
  std::vector<Clause> clauses_;
};

/// Boolean vector of length n; entry v is the value of x_v.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int n) : bits_(static_cast<std::size_t>(n), 0) {}

  static Assignment from_set(const VarSet& ones, int n) {
    Assignment w(n);
    ones.for_each([&](int v) {
      if (v <= n) w.set(v, true);
    });
    return w;
  }

  static Assignment parse(const std::string& s) {
    Assignment w(static_cast<int>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw cnf_error("assignment must be a 0/1 string");
      w.bits_[i] = s[i] == '1';
    }
    return w;
  }

  int n() const { return static_cast<int>(bits_.size()); }
  bool operator[](int v) const { return bits_.at(static_cast<std::size_t>(v - 1)) != 0; }
  void set(int v, bool value) { bits_.at(static_cast<std::size_t>(v - 1)) = value; }

  VarSet ones() const {
    VarSet s(n());
    for (int v = 1; v <= n(); ++v)
      if ((*this)[v]) s.insert(v);
    return s;
  }

  Assignment complement() const {
    Assignment w = *this;
    for (auto& b : w.bits_) b = !b;
    return w;
  }

  std::string to_string() const {
    std::string s;
    for (char b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<char> bits_;
};

/// Permutation of 1..n; position p (1-based) holds the variable playing x_p.
class VariableOrdering {
 public:
  VariableOrdering() = default;

  explicit VariableOrdering(std::vector<int> order) : order_(std::move(order)), pos_(order_.size() + 1, 0) {
    int n = static_cast<int>(order_.size());
    for (int p = 1; p <= n; ++p) {
      int v = order_[static_cast<std::size_t>(p - 1)];
      if (v < 1 || v > n || pos_[static_cast<std::size_t>(v)] != 0)
        throw cnf_error("ordering is not a permutation of 1.." + std::to_string(n));
      pos_[static_cast<std::size_t>(v)] = p;
    }
  }

  static VariableOrdering identity(int n) {
    std::vector<int> o(static_cast<std::size_t>(n));
    std::iota(o.begin(), o.end(), 1);
    return VariableOrdering(std::move(o));
  }

  int n() const { return static_cast<int>(order_.size()); }
  int at(int position) const { return order_.at(static_cast<std::size_t>(position - 1)); }
  int position(int var) const { return pos_.at(static_cast<std::size_t>(var)); }
  const std::vector<int>& order() const { return order_; }

  /// Renames every variable to its position.
  VarSet to_positions(const VarSet& s) const {
    VarSet r(n());
    s.for_each([&](int v) { r.insert(position(v)); });
    return r;
  }

  VarSet from_positions(const VarSet& s) const {
    VarSet r(n());
    s.for_each([&](int p) { r.insert(at(p)); });
    return r;
  }

  friend bool operator==(const VariableOrdering& a, const VariableOrdering& b) { return a.order_ == b.order_; }

 private:
  std::vector<int> order_;
  std::vector<int> pos_;
};

/// Removes every clause that is a superset of another clause.
inline MonotoneCnf minimize(const MonotoneCnf& cnf) {
  const auto& cs = cnf.clauses();
  std::vector<std::size_t> idx(cs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return cs[a].size() < cs[b].size(); });
  std::vector<char> keep(cs.size(), 0);
  std::vector<std::size_t> kept;
  for (std::size_t i : idx) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) { return cs[k].is_subset_of(cs[i]); });
    if (!dominated) {
      keep[i] = 1;
      kept.push_back(i);
    }
  }
  std::vector<Clause> out;
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (keep[i]) out.push_back(cs[i]);
  return MonotoneCnf(cnf.n(), std::move(out));
}

inline bool is_prime(const MonotoneCnf& cnf) {
  const auto& cs = cnf.clauses();
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (i != j && cs[i].is_subset_of(cs[j])) return false;
  return true;
}

inline bool evaluate(const MonotoneCnf& cnf, const Assignment& w) {
  if (w.n() != cnf.n()) throw cnf_error("assignment length differs from universe size");
  VarSet ones = w.ones();
  return std::all_of(cnf.clauses().begin(), cnf.clauses().end(), [&](const Clause& c) { return c.intersects(ones); });
}

/// phi_i: the clauses whose variables all sit in the first i positions.
inline MonotoneCnf restrict(const MonotoneCnf& cnf, const VariableOrdering& ord, int i) {
  if (i < 0 || i > cnf.n()) throw cnf_error("restriction index out of range");
  std::vector<Clause> out;
  for (const auto& c : cnf.clauses()) {
    bool inside = true;
    c.for_each([&](int v) { inside = inside && ord.position(v) <= i; });
    if (inside) out.push_back(c);
  }
  return MonotoneCnf(cnf.n(), std::move(out));
}

/// Position (under ord) of the last variable of c.
inline int last_position(const Clause& c, const VariableOrdering& ord) {
  int p = 0;
  c.for_each([&](int v) { p = std::max(p, ord.position(v)); });
  return p;
}

/// Delta^i: the clauses whose last variable under ord sits at position i.
inline MonotoneCnf delta(const MonotoneCnf& cnf, const VariableOrdering& ord, int i) {
  if (i < 1 || i > cnf.n()) throw cnf_error("delta index out of range");
  std::vector<Clause> out;
  for (const auto& c : cnf.clauses())
    if (last_position(c, ord) == i) out.push_back(c);
  return MonotoneCnf(cnf.n(), std::move(out));
}

/// Result of conditioning Delta^i on a term: either a clause set (possibly
/// empty, i.e. constant 1) or the constant 0.
struct ConditionedDelta {
  bool zero = false;
  MonotoneCnf cnf;

  bool is_zero() const { return zero; }
  bool is_one() const { return !zero && cnf.empty(); }
};

/// Delta^i[t]: each clause of Delta^i with x_i removed, kept iff it misses t.
/// Every clause of delta_i must contain the variable at position i.
inline ConditionedDelta delta_conditioned(const MonotoneCnf& delta_i, const VariableOrdering& ord, int i,
                                          const Term& t) {
  int pivot = ord.at(i);
  ConditionedDelta r{false, MonotoneCnf(delta_i.n())};
  std::vector<Clause> out;
  for (const auto& d : delta_i.clauses()) {
    if (!d.contains(pivot)) throw cnf_error("clause of Delta^i lacks the position-i variable");
    Clause c = d;
    c.erase(pivot);
    if (c.intersects(t)) continue;
    if (c.empty()) {
      r.zero = true;
      return r;
    }
    out.push_back(std::move(c));
  }
  // Distinct clauses of Delta^i all contain the pivot, so their reductions stay distinct.
  r.cnf = MonotoneCnf(delta_i.n(), std::move(out));
  return r;
}

inline TermKey term_key(const Term& t, int n) {
  TermKey k = 0;
  t.for_each([&](int v) {
    if (v < 1 || v > n) throw cnf_error("term variable outside universe");
    boost::multiprecision::bit_set(k, static_cast<unsigned>(n - v));
  });
  return k;
}

/// Key of t when position p of ord plays x_p.
inline TermKey term_key(const Term& t, const VariableOrdering& ord) { return term_key(ord.to_positions(t), ord.n()); }

inline bool is_implicant(const MonotoneCnf& cnf, const Term& t) {
  return std::all_of(cnf.clauses().begin(), cnf.clauses().end(), [&](const Clause& c) { return c.intersects(t); });
}

/// For monotone functions an implicant is prime iff no single variable can be dropped.
inline bool is_prime_implicant(const MonotoneCnf& cnf, const Term& t) {
  if (!is_implicant(cnf, t)) return false;
  bool prime = true;
  t.for_each([&](int v) {
    if (!prime) return;
    Term s = t;
    s.erase(v);
    if (is_implicant(cnf, s)) prime = false;
  });
  return prime;
}

/// Renames variables to their positions under ord.
inline MonotoneCnf relabel(const MonotoneCnf& cnf, const VariableOrdering& ord) {
  std::vector<Clause> out;
  out.reserve(cnf.size());
  for (const auto& c : cnf.clauses()) out.push_back(ord.to_positions(c));
  return MonotoneCnf(cnf.n(), std::move(out));
}

/// Drops unused variables, renumbering the rest in increasing order.
/// `original[k]` is the old index of new variable k (entry 0 unused).
struct Compaction {
  MonotoneCnf cnf;
  std::vector<int> original;

  Term expand(const Term& t) const {
    Term r(original.empty() ? 0 : original.back());
    t.for_each([&](int v) { r.insert(original.at(static_cast<std::size_t>(v))); });
    return r;
  }
};

inline Compaction compact(const MonotoneCnf& cnf) {
  VarSet used = cnf.used_variables();
  std::vector<int> original{0};
  std::vector<int> fresh(static_cast<std::size_t>(cnf.n()) + 1, 0);
  used.for_each([&](int v) {
    fresh[static_cast<std::size_t>(v)] = static_cast<int>(original.size());
    original.push_back(v);
  });
  int m = static_cast<int>(original.size()) - 1;
  std::vector<Clause> out;
  out.reserve(cnf.size());
  for (const auto& c : cnf.clauses()) {
    Clause d(m);
    c.for_each([&](int v) { d.insert(fresh[static_cast<std::size_t>(v)]); });
    out.push_back(std::move(d));
  }
  return Compaction{MonotoneCnf(m, std::move(out)), std::move(original)};
}

/// Clause hypergraph of terms read as clauses (used for involution checks).
inline MonotoneCnf terms_as_cnf(int n, const std::vector<Term>& terms) {
  std::vector<Clause> cs;
  for (const auto& t : terms) cs.push_back(t);
  return MonotoneCnf(n, std::move(cs));
}

}  // namespace mdual
