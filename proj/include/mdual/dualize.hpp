#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdual/cnf.hpp"

namespace mdual {

enum class RhoMode { expand, recursive, automatic };

/// How the prime DNF of each Delta^i[t] is obtained.
/// `automatic` expands small instances (at most `expand_limit` clauses) and
/// recurses on larger ones.
struct RhoStrategy {
  RhoMode mode = RhoMode::automatic;
  int recursion_budget = 8;
  std::size_t expand_limit = 16;

  static RhoStrategy expand() { return {RhoMode::expand, 1, 0}; }
  static RhoStrategy recursive(int budget) { return {RhoMode::recursive, budget, 0}; }
};

class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DualizeStats {
  std::size_t emitted = 0;
  std::size_t inserted = 0;
  std::size_t duplicate_inserts = 0;
  std::size_t rho_calls = 0;
  std::size_t max_rho = 0;  // largest |rho_(t,i)| seen, bounded by |PI(f)|
  int max_depth = 1;        // deepest recursion level reached (top level is 1)
};

namespace detail {

inline void remove_supersets(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.size() < b.size(); });
  std::vector<Term> kept;
  for (auto& t : terms) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Term& k) { return k.is_subset_of(t); });
    if (!dominated) kept.push_back(std::move(t));
  }
  terms = std::move(kept);
}

/// Distributive-law expansion with minimality pruning after every clause.
inline std::vector<Term> expand_prime_dnf(int n, std::vector<Clause> clauses) {
  std::sort(clauses.begin(), clauses.end(), [](const Clause& a, const Clause& b) { return a.size() < b.size(); });
  std::vector<Term> terms{Term(n)};
  for (const auto& c : clauses) {
    if (c.empty()) return {};
    std::vector<Term> next;
    for (const auto& t : terms) {
      if (t.intersects(c)) {
        next.push_back(t);
        continue;
      }
      c.for_each([&](int v) {
        Term u = t;
        u.insert(v);
        next.push_back(std::move(u));
      });
    }
    remove_supersets(next);
    terms = std::move(next);
  }
  return terms;
}

/// Clause occurrence lists of a CNF whose variable names are positions.
struct PositionIndex {
  const MonotoneCnf* cnf = nullptr;
  std::vector<std::vector<std::size_t>> occ;
  std::vector<int> last_pos;

  PositionIndex() = default;
  explicit PositionIndex(const MonotoneCnf& c)
      : cnf(&c), occ(static_cast<std::size_t>(c.n()) + 1), last_pos(c.size()) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      c.clause(j).for_each([&](int v) { occ[static_cast<std::size_t>(v)].push_back(j); });
      last_pos[j] = c.clause(j).max();
    }
  }

  /// Greedy: start from prefix plus every later position, then try to drop
  /// positions i+1..n in order. Dropping the heaviest positions first yields
  /// the minimum key among prime implicants extending the prefix.
  Term extend(const Term& prefix, int i) const {
    int n = cnf->n();
    std::vector<int> count(cnf->size(), 0);
    Term s = prefix.prefix(i);
    for (int v = i + 1; v <= n; ++v) s.insert(v);
    for (std::size_t c = 0; c < cnf->size(); ++c) {
      count[c] = (cnf->clause(c) & s).size();
      if (count[c] == 0) throw std::logic_error("extend_to_smallest: fixing the prefix makes f constant 0");
    }
    for (int v = i + 1; v <= n; ++v) {
      const auto& o = occ[static_cast<std::size_t>(v)];
      bool droppable = std::all_of(o.begin(), o.end(), [&](std::size_t c) { return count[c] >= 2; });
      if (!droppable) continue;
      s.erase(v);
      for (std::size_t c : o) --count[c];
    }
    return s;
  }
};

}  // namespace detail

class Dualizer;

inline std::vector<Term> rho_of_delta(const MonotoneCnf& d, const RhoStrategy& strategy, int depth,
                                      int* depth_reached);

inline std::vector<Term> rho_of_delta(const MonotoneCnf& d, const RhoStrategy& strategy) {
  return rho_of_delta(d, strategy, 1, nullptr);
}

/// Algorithm DUALIZE: streams the prime implicants of a prime monotone CNF in
/// strictly increasing term-key order under the given variable ordering.
///
/// Internally everything runs in position space (position p is variable p);
/// emitted terms are mapped back to the caller's variable names.
class Dualizer {
 public:
  Dualizer(const MonotoneCnf& cnf, VariableOrdering ord, RhoStrategy strategy = {})
      : Dualizer(cnf, std::move(ord), strategy, 1, true) {}

  Dualizer(const Dualizer&) = delete;
  Dualizer& operator=(const Dualizer&) = delete;

  /// Next prime implicant, or nullopt once all have been produced.
  std::optional<Term> next() {
    if (pending_) {
      expand(*pending_);
      pending_.reset();
    }
    if (queue_.empty()) return std::nullopt;
    Term t = *queue_.begin();
    queue_.erase(queue_.begin());
    last_ = t;
    pending_ = t;
    ++stats_.emitted;
    return ord_.from_positions(t);
  }

  void reset() {
    queue_.clear();
    pending_.reset();
    last_.reset();
    stats_ = DualizeStats{};
    stats_.max_depth = depth_;
    queue_.insert(extend(Term(n_), 0));
    stats_.inserted = 1;
  }

  const DualizeStats& stats() const { return stats_; }
  const VariableOrdering& ordering() const { return ord_; }
  int n() const { return n_; }

  /// Smallest prime implicant whose restriction to the first i positions is
  /// `prefix` (all names in position space).
  Term extend(const Term& prefix, int i) const { return index_.extend(prefix, i); }

 private:
  friend std::vector<Term> rho_of_delta(const MonotoneCnf&, const RhoStrategy&, int, int*);

  Dualizer(const MonotoneCnf& cnf, VariableOrdering ord, RhoStrategy strategy, int depth, bool validate)
      : n_(cnf.n()), ord_(std::move(ord)), strategy_(strategy), depth_(depth) {
    if (ord_.n() != n_) throw cnf_error("ordering size differs from universe size");
    if (validate) {
      if (!cnf.uses_all_variables()) throw cnf_error("dualize requires every variable 1..n to occur; compact first");
      if (!is_prime(cnf)) throw cnf_error("dualize requires a prime CNF");
      if (strategy_.mode != RhoMode::expand && strategy_.recursion_budget < 1)
        throw cnf_error("recursion budget must be at least 1");
    }
    pcnf_ = relabel(cnf, ord_);
    index_ = detail::PositionIndex(pcnf_);
    deltas_.assign(static_cast<std::size_t>(n_) + 1, {});
    for (std::size_t c = 0; c < pcnf_.size(); ++c)
      deltas_[static_cast<std::size_t>(index_.last_pos[c])].push_back(c);
    reset();
  }

  /// Is s (inside the first i-1 positions) a prime implicant of f_i?
  bool prime_implicant_of_restriction(const Term& s, int i) const {
    std::vector<int> sole_hits(static_cast<std::size_t>(n_) + 1, 0);
    for (std::size_t c = 0; c < pcnf_.size(); ++c) {
      if (index_.last_pos[c] > i) continue;
      Clause h = pcnf_.clause(c) & s;
      int k = h.size();
      if (k == 0) return false;
      if (k == 1) ++sole_hits[static_cast<std::size_t>(h.min())];
    }
    bool prime = true;
    s.for_each([&](int v) { prime = prime && sole_hits[static_cast<std::size_t>(v)] > 0; });
    return prime;
  }

  void expand(const Term& t) {
    t.for_each([&](int i) {
      const auto& di = deltas_[static_cast<std::size_t>(i)];
      if (di.empty()) return;
      std::vector<Clause> conditioned;
      for (std::size_t c : di) {
        Clause r = pcnf_.clause(c);
        r.erase(i);
        if (r.intersects(t)) continue;
        if (r.empty()) return;  // Delta^i[t] = 0: no prime implicants
        conditioned.push_back(std::move(r));
      }
      if (conditioned.empty()) return;  // Delta^i[t] = 1
      MonotoneCnf d = minimize(MonotoneCnf(n_, std::move(conditioned)));
      int reached = depth_;
      std::vector<Term> rho = rho_of_delta(d, strategy_, depth_, &reached);
      stats_.max_depth = std::max(stats_.max_depth, reached);
      ++stats_.rho_calls;
      stats_.max_rho = std::max(stats_.max_rho, rho.size());
      Term head = t.prefix(i - 1);
      for (const auto& tp : rho) {
        Term cand = head | tp;
        if (!prime_implicant_of_restriction(cand, i)) continue;
        Term star = extend(cand, i);
        if (last_ && !key_less(*last_, star)) {
          ++stats_.duplicate_inserts;
          continue;
        }
        if (queue_.insert(std::move(star)).second)
          ++stats_.inserted;
        else
          ++stats_.duplicate_inserts;
      }
    });
  }

  int n_;
  VariableOrdering ord_;
  RhoStrategy strategy_;
  int depth_;
  MonotoneCnf pcnf_;
  detail::PositionIndex index_;
  std::vector<std::vector<std::size_t>> deltas_;
  std::set<Term, KeyLess> queue_;
  std::optional<Term> pending_;
  std::optional<Term> last_;
  DualizeStats stats_;
};

/// Prime DNF of d. `depth` is the recursion level of the caller; on return
/// `*depth_reached` holds the deepest level used.
inline std::vector<Term> rho_of_delta(const MonotoneCnf& d, const RhoStrategy& strategy, int depth,
                                      int* depth_reached) {
  if (depth_reached) *depth_reached = depth;
  if (d.empty()) return {Term(d.n())};
  bool recurse = strategy.mode == RhoMode::recursive ||
                 (strategy.mode == RhoMode::automatic && d.size() > strategy.expand_limit);
  if (!recurse) return detail::expand_prime_dnf(d.n(), d.clauses());

  if (depth + 1 > strategy.recursion_budget)
    throw budget_error("recursion budget of " + std::to_string(strategy.recursion_budget) + " exceeded");
  Compaction cp = compact(d);
  Dualizer inner(cp.cnf, VariableOrdering::identity(cp.cnf.n()), strategy, depth + 1, false);
  std::vector<Term> out;
  while (auto t = inner.next()) {
    Term r(d.n());
    t->for_each([&](int v) { r.insert(cp.original[static_cast<std::size_t>(v)]); });
    out.push_back(std::move(r));
  }
  if (depth_reached) *depth_reached = inner.stats().max_depth;
  return out;
}

/// Smallest prime implicant under ord (identity when omitted). Constant 1
/// yields the empty term.
inline Term smallest_prime_implicant(const MonotoneCnf& cnf, const VariableOrdering& ord) {
  MonotoneCnf p = relabel(cnf, ord);
  detail::PositionIndex idx(p);
  return ord.from_positions(idx.extend(Term(cnf.n()), 0));
}

inline Term smallest_prime_implicant(const MonotoneCnf& cnf) {
  return smallest_prime_implicant(cnf, VariableOrdering::identity(cnf.n()));
}

/// Smallest prime implicant t* of f with t*_i = prefix (original variable names).
inline Term extend_to_smallest(const MonotoneCnf& cnf, const VariableOrdering& ord, const Term& prefix, int i) {
  if (i < 0 || i > cnf.n()) throw cnf_error("extend_to_smallest: index out of range");
  MonotoneCnf p = relabel(cnf, ord);
  detail::PositionIndex idx(p);
  return ord.from_positions(idx.extend(ord.to_positions(prefix), i));
}

inline std::vector<Term> dualize_all(const MonotoneCnf& cnf, const VariableOrdering& ord, RhoStrategy strategy = {},
                                     DualizeStats* stats = nullptr) {
  Dualizer dz(cnf, ord, strategy);
  std::vector<Term> out;
  while (auto t = dz.next()) out.push_back(std::move(*t));
  if (stats) *stats = dz.stats();
  return out;
}

inline std::vector<Term> dualize_all(const MonotoneCnf& cnf, RhoStrategy strategy = {}) {
  return dualize_all(cnf, VariableOrdering::identity(cnf.n()), strategy);
}

struct RDualizeResult {
  std::vector<Term> terms;
  int depth = 1;
};

/// R-Dualize: every rho is computed by a nested DUALIZE run. Unused variables
/// are compacted away first.
inline RDualizeResult r_dualize(const MonotoneCnf& cnf, int depth_limit) {
  Compaction cp = compact(cnf);
  Dualizer dz(cp.cnf, VariableOrdering::identity(cp.cnf.n()), RhoStrategy::recursive(depth_limit));
  RDualizeResult r;
  while (auto t = dz.next()) {
    Term full(cnf.n());
    full |= cp.expand(*t);
    r.terms.push_back(std::move(full));
  }
  r.depth = dz.stats().max_depth;
  return r;
}

/// Wall-clock gaps of one enumeration run, in nanoseconds. Gaps are measured
/// between start and the first output and between consecutive outputs; the
/// tail is the time from the last output until the stream reports exhaustion.
struct DelayReport {
  std::size_t outputs = 0;
  bool truncated = false;
  std::int64_t first_ns = 0;
  std::int64_t max_ns = 0;
  double mean_ns = 0;
  std::int64_t p50_ns = 0;
  std::int64_t p95_ns = 0;
  std::int64_t tail_ns = 0;
  std::int64_t total_ns = 0;
};

/// Runs `next` until it yields nullopt or `max_outputs` items were produced.
template <typename Next>
DelayReport measure_delay(Next&& next, std::size_t max_outputs = std::numeric_limits<std::size_t>::max()) {
  using clock = std::chrono::steady_clock;
  auto ns = [](clock::duration d) { return std::chrono::duration_cast<std::chrono::nanoseconds>(d).count(); };
  DelayReport r;
  std::vector<std::int64_t> gaps;
  auto start = clock::now();
  auto prev = start;
  while (true) {
    if (r.outputs == max_outputs) {
      r.truncated = true;
      break;
    }
    auto item = next();
    auto now = clock::now();
    if (!item) {
      r.tail_ns = ns(now - prev);
      prev = now;
      break;
    }
    gaps.push_back(ns(now - prev));
    prev = now;
    ++r.outputs;
  }
  r.total_ns = ns(prev - start);
  if (!gaps.empty()) {
    r.first_ns = gaps.front();
    std::int64_t sum = 0;
    for (auto g : gaps) sum += g;
    r.mean_ns = static_cast<double>(sum) / static_cast<double>(gaps.size());
    std::vector<std::int64_t> sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    r.max_ns = sorted.back();
    r.p50_ns = sorted[(sorted.size() - 1) / 2];
    r.p95_ns = sorted[(sorted.size() - 1) * 95 / 100];
  }
  return r;
}

inline DelayReport measure_delay(Dualizer& dz, std::size_t max_outputs = std::numeric_limits<std::size_t>::max()) {
  return measure_delay([&] { return dz.next(); }, max_outputs);
}

}  // namespace mdual
