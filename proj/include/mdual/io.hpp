#pragma once

// Text formats: hypergraph files, tree decompositions, certificates.

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdual/cnf.hpp"
#include "mdual/fk.hpp"
#include "mdual/structure.hpp"

namespace mdual::io {

class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string strip_comment(std::string s) {
  if (auto p = s.find('#'); p != std::string::npos) s.erase(p);
  return s;
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

inline long long to_int(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw parse_error(line, "expected an integer, got '" + tok + "'");
  }
}

}  // namespace detail

// ---------------------------------------------------------------- hypergraph

/// Optional `p mhg <n> <m>` header, one clause per line, `#` comments.
inline MonotoneCnf read_hypergraph(std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<int>>> rows;
  long long n = -1, m = -1;
  std::size_t lineno = 0, header_line = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    auto tok = detail::tokens(detail::strip_comment(raw));
    if (tok.empty()) continue;
    if (tok[0] == "p") {
      if (n >= 0) throw parse_error(lineno, "second header");
      if (!rows.empty()) throw parse_error(lineno, "header after clauses");
      if (tok.size() != 4 || tok[1] != "mhg") throw parse_error(lineno, "header must be 'p mhg <n> <m>'");
      n = detail::to_int(tok[2], lineno);
      m = detail::to_int(tok[3], lineno);
      if (n < 0 || m < 0) throw parse_error(lineno, "negative size in header");
      if (n > kMaxVars) throw parse_error(lineno, "n exceeds " + std::to_string(kMaxVars));
      header_line = lineno;
      continue;
    }
    std::vector<int> clause;
    for (const auto& t : tok) {
      long long v = detail::to_int(t, lineno);
      if (v < 1) throw parse_error(lineno, "variable index must be >= 1");
      if (n >= 0 && v > n) throw parse_error(lineno, "variable " + t + " exceeds n=" + std::to_string(n));
      if (v > kMaxVars) throw parse_error(lineno, "variable " + t + " exceeds " + std::to_string(kMaxVars));
      if (!clause.empty() && v <= clause.back())
        throw parse_error(lineno, "indices must be strictly ascending");
      clause.push_back(static_cast<int>(v));
    }
    rows.emplace_back(lineno, std::move(clause));
  }
  if (m >= 0 && static_cast<std::size_t>(m) != rows.size())
    throw parse_error(header_line, "header announces " + std::to_string(m) + " clauses, found " + std::to_string(rows.size()));
  int width = static_cast<int>(n);
  if (width < 0) {
    width = 0;
    for (const auto& [l, c] : rows) width = std::max(width, c.back());
  }
  MonotoneCnf cnf(width);
  for (const auto& [l, c] : rows) {
    Clause s(width);
    for (int v : c) s.insert(v);
    try {
      cnf.add_clause(std::move(s));
    } catch (const cnf_error& e) {
      throw parse_error(l, e.what());
    }
  }
  return cnf;
}

inline MonotoneCnf parse_hypergraph(const std::string& text) {
  std::istringstream in(text);
  return read_hypergraph(in);
}

inline std::string format_set(const VarSet& s) {
  std::string out;
  s.for_each([&](int v) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  });
  return out;
}

inline void write_hypergraph(std::ostream& out, const MonotoneCnf& cnf) {
  out << "p mhg " << cnf.n() << ' ' << cnf.size() << '\n';
  for (const auto& c : cnf.clauses()) out << format_set(c) << '\n';
}

// ---------------------------------------------------------- tree decompositions

/// `td <nodes> <width+1> <vertices>`, `b <id> <vertex...>` with clause vertices
/// as `c<index>`, and edge lines `<id> <id>`. Node ids are 1-based on disk.
inline TreeDecomposition read_td(std::istream& in) {
  TreeDecomposition td;
  long long nodes = -1, declared = -1;
  bool any_clause = false;
  std::vector<char> seen;
  std::size_t lineno = 0, header_line = 0;
  auto node_id = [&](const std::string& t, std::size_t l) {
    long long id = detail::to_int(t, l);
    if (id < 1 || id > nodes) throw parse_error(l, "node id " + t + " outside 1.." + std::to_string(nodes));
    return static_cast<int>(id - 1);
  };
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    auto tok = detail::tokens(detail::strip_comment(raw));
    if (tok.empty()) continue;
    if (tok[0] == "td") {
      if (nodes >= 0) throw parse_error(lineno, "second header");
      if (tok.size() != 4) throw parse_error(lineno, "header must be 'td <nodes> <width+1> <vertices>'");
      nodes = detail::to_int(tok[1], lineno);
      declared = detail::to_int(tok[2], lineno);
      detail::to_int(tok[3], lineno);
      if (nodes < 1) throw parse_error(lineno, "decomposition needs at least one node");
      td.bags.assign(static_cast<std::size_t>(nodes), Bag{});
      seen.assign(static_cast<std::size_t>(nodes), 0);
      header_line = lineno;
      continue;
    }
    if (nodes < 0) throw parse_error(lineno, "missing 'td' header");
    if (tok[0] == "b") {
      if (tok.size() < 2) throw parse_error(lineno, "bag line needs a node id");
      int id = node_id(tok[1], lineno);
      if (seen[static_cast<std::size_t>(id)]) throw parse_error(lineno, "bag " + tok[1] + " given twice");
      seen[static_cast<std::size_t>(id)] = 1;
      Bag& bag = td.bags[static_cast<std::size_t>(id)];
      for (std::size_t k = 2; k < tok.size(); ++k) {
        bool clause = tok[k][0] == 'c';
        long long v = detail::to_int(clause ? tok[k].substr(1) : tok[k], lineno);
        if (v < 1 || v > kMaxVars) throw parse_error(lineno, "vertex '" + tok[k] + "' out of range");
        (clause ? bag.clauses : bag.vars).insert(static_cast<int>(v));
        any_clause |= clause;
      }
      continue;
    }
    if (tok.size() != 2) throw parse_error(lineno, "edge line must hold two node ids");
    td.edges.emplace_back(node_id(tok[0], lineno), node_id(tok[1], lineno));
  }
  if (nodes < 0) throw parse_error(lineno, "missing 'td' header");
  if (td.width() + 1 != declared)
    throw parse_error(header_line, "header width+1 is " + std::to_string(declared) + ", bags give " + std::to_string(td.width() + 1));
  td.kind = any_clause ? TdKind::type2 : TdKind::type1;
  return td;
}

inline void write_td(std::ostream& out, const TreeDecomposition& td, const MonotoneCnf& cnf) {
  std::size_t vertices = static_cast<std::size_t>(cnf.n()) + (td.kind == TdKind::type2 ? cnf.size() : 0);
  out << "td " << td.bags.size() << ' ' << td.width() + 1 << ' ' << vertices << '\n';
  for (std::size_t i = 0; i < td.bags.size(); ++i) {
    out << "b " << i + 1;
    td.bags[i].vars.for_each([&](int v) { out << ' ' << v; });
    td.bags[i].clauses.for_each([&](int c) { out << " c" << c; });
    out << '\n';
  }
  for (auto [a, b] : td.edges) out << a + 1 << ' ' << b + 1 << '\n';
}

// ---------------------------------------------------------------- certificates

/// `V:<v*>`, then `A:<count>` / `G:<bits>` per ac-block and `B:<j>` between.
inline void write_certificate(std::ostream& out, const fk::Certificate& c) {
  out << "V:" << c.v_star << '\n';
  for (std::size_t k = 0; k < c.ac.size(); ++k) {
    if (k > 0) out << "B:" << c.b[k - 1] << '\n';
    out << "A:" << c.ac[k].alpha << '\n';
    out << "G:";
    for (bool g : c.ac[k].gamma) out << (g ? '1' : '0');
    out << '\n';
  }
}

inline fk::Certificate read_certificate(std::istream& in) {
  fk::Certificate c;
  c.ac.clear();
  bool have_v = false, expect_g = false;
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    auto tok = detail::tokens(detail::strip_comment(raw));
    if (tok.empty()) continue;
    const std::string& t = tok[0];
    if (tok.size() != 1 || t.size() < 2 || t[1] != ':') throw parse_error(lineno, "expected '<tag>:<value>'");
    std::string val = t.substr(2);
    char tag = t[0];
    if (expect_g && tag != 'G') throw parse_error(lineno, "A-line must be followed by a G-line");
    switch (tag) {
      case 'V':
        if (have_v || !c.ac.empty()) throw parse_error(lineno, "V-line must come first, once");
        c.v_star = static_cast<std::size_t>(detail::to_int(val, lineno));
        have_v = true;
        break;
      case 'A': {
        if (c.ac.size() != c.b.size()) throw parse_error(lineno, "two ac-blocks without a B-line between");
        long long a = detail::to_int(val, lineno);
        if (a < 0) throw parse_error(lineno, "negative a-count");
        c.ac.push_back(fk::AcBlock{static_cast<std::uint64_t>(a), {}});
        expect_g = true;
        break;
      }
      case 'G':
        if (!expect_g) throw parse_error(lineno, "G-line without a preceding A-line");
        for (char ch : val) {
          if (ch != '0' && ch != '1') throw parse_error(lineno, "gamma labels must be 0/1");
          c.ac.back().gamma.push_back(ch == '1');
        }
        expect_g = false;
        break;
      case 'B': {
        if (c.ac.size() != c.b.size() + 1) throw parse_error(lineno, "B-line must follow an ac-block");
        long long j = detail::to_int(val, lineno);
        if (j < 1) throw parse_error(lineno, "j-label must be >= 1");
        c.b.push_back(static_cast<std::size_t>(j));
        break;
      }
      default:
        throw parse_error(lineno, std::string("unknown tag '") + tag + "'");
    }
  }
  if (!have_v) throw parse_error(lineno, "missing V-line");
  if (expect_g) throw parse_error(lineno, "A-line must be followed by a G-line");
  if (!c.well_formed()) throw parse_error(lineno, "certificate must end with an ac-block");
  return c;
}

inline std::string certificate_text(const fk::Certificate& c) {
  std::ostringstream out;
  write_certificate(out, c);
  return out.str();
}

inline fk::Certificate parse_certificate(const std::string& text) {
  std::istringstream in(text);
  return read_certificate(in);
}

}  // namespace mdual::io
