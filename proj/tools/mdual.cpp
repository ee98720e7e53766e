// mdual command-line front end.
//
// Exit codes: 0 ok / DUAL / confirmed, 1 NOT-DUAL / not confirmed,
// 2 parse or usage error, 3 guard or budget error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdual/cnf.hpp"
#include "mdual/dualize.hpp"
#include "mdual/fk.hpp"
#include "mdual/generators.hpp"
#include "mdual/io.hpp"
#include "mdual/oracle.hpp"
#include "mdual/structure.hpp"

using json = nlohmann::ordered_json;
using namespace mdual;

namespace {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct guard_exit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

MonotoneCnf load_cnf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open " + path);
  try {
    return io::read_hypergraph(in);
  } catch (const io::parse_error& e) {
    throw io::parse_error(e.line(), path + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
}

// Both members of a pair on one universe.
MonotoneCnf widen(const MonotoneCnf& f, int n) { return f.n() == n ? f : MonotoneCnf(n, f.clauses()); }

RhoStrategy parse_strategy(const std::string& s) {
  if (s == "auto") return RhoStrategy{};
  if (s == "expand") return RhoStrategy::expand();
  if (s.rfind("recursive", 0) == 0) {
    int budget = 8;
    if (s.size() > 9) {
      if (s[9] != ':') throw usage_error("strategy must be auto, expand or recursive[:<budget>]");
      budget = std::stoi(s.substr(10));
    }
    return RhoStrategy::recursive(budget);
  }
  throw usage_error("strategy must be auto, expand or recursive[:<budget>]");
}

std::vector<int> parse_perm(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  for (std::string tok; std::getline(in, tok, ',');) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw usage_error("bad permutation entry '" + tok + "'");
    }
  }
  return out;
}

// Ordering of the original universe restricted to the variables of a compaction.
VariableOrdering restrict_ordering(const VariableOrdering& full, const Compaction& cp) {
  std::vector<int> fresh(static_cast<std::size_t>(full.n()) + 1, 0);
  for (std::size_t k = 1; k < cp.original.size(); ++k) fresh[static_cast<std::size_t>(cp.original[k])] = static_cast<int>(k);
  std::vector<int> order;
  for (int v : full.order())
    if (fresh[static_cast<std::size_t>(v)]) order.push_back(fresh[static_cast<std::size_t>(v)]);
  return VariableOrdering(std::move(order));
}

json delay_json(const DelayReport& d) {
  return json{{"first_ns", d.first_ns}, {"max_ns", d.max_ns},   {"mean_ns", d.mean_ns}, {"p50_ns", d.p50_ns},
              {"p95_ns", d.p95_ns},     {"tail_ns", d.tail_ns}, {"total_ns", d.total_ns}};
}

json instance_json(const MonotoneCnf& f) { return json{{"n", f.n()}, {"m", f.size()}, {"length", f.length()}}; }

void emit_report(const json& report, const std::string& path) {
  if (path.empty()) {
    std::cerr << report.dump() << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw usage_error("cannot write " + path);
  out << report.dump(2) << '\n';
}

// ------------------------------------------------------------------ dualize

struct DualizeArgs {
  std::string input, ordering = "identity", strategy = "auto", report;
  bool buffer = false;
  std::size_t limit = 0;
};

int cmd_dualize(const DualizeArgs& a) {
  MonotoneCnf raw = load_cnf(a.input);
  MonotoneCnf prime = minimize(raw);
  Compaction cp = compact(prime);
  RhoStrategy strategy = parse_strategy(a.strategy);

  VariableOrdering full;
  std::string source = a.ordering;
  if (a.ordering == "identity") {
    full = VariableOrdering::identity(raw.n());
  } else if (a.ordering == "smallest-last") {
    full = smallest_last_ordering(prime).ord;
  } else if (a.ordering == "gyo") {
    auto trace = gyo_reduce(prime);
    if (!trace.success) throw usage_error("--ordering gyo: input is not alpha-acyclic");
    full = ordering_from_gyo(trace, prime.n());
  } else if (a.ordering.rfind("td:", 0) == 0) {
    std::ifstream in(a.ordering.substr(3));
    if (!in) throw usage_error("cannot open " + a.ordering.substr(3));
    TreeDecomposition td = io::read_td(in);
    if (td.kind == TdKind::type1) td = td1_to_td2(td, raw);
    full = ordering_from_td2(td, raw);
  } else if (a.ordering.rfind("given:", 0) == 0) {
    try {
      full = VariableOrdering(parse_perm(a.ordering.substr(6)));
    } catch (const cnf_error& e) {
      throw usage_error(std::string("--ordering given: ") + e.what());
    }
    if (full.n() != raw.n()) throw usage_error("--ordering given: permutation must cover 1.." + std::to_string(raw.n()));
  } else {
    throw usage_error("ordering must be identity, smallest-last, gyo, td:<file> or given:<perm>");
  }
  VariableOrdering ord = restrict_ordering(full, cp);

  std::ostringstream buffered;
  std::ostream& out = a.buffer ? static_cast<std::ostream&>(buffered) : std::cout;
  Dualizer dz(cp.cnf, ord, strategy);
  auto step = [&]() -> std::optional<Term> {
    auto t = dz.next();
    if (t) {
      out << io::format_set(cp.expand(*t)) << '\n';
      if (!a.buffer) out.flush();
    }
    return t;
  };
  DelayReport d = a.limit ? measure_delay(step, a.limit) : measure_delay(step);
  if (a.buffer) std::cout << buffered.str() << std::flush;

  json report{{"command", "dualize"},
              {"instance", instance_json(raw)},
              {"minimized", !(prime == raw)},
              {"classes", json{{"read", read_number(prime)}, {"degeneracy", smallest_last_ordering(prime).k}}},
              {"algorithm", "dualize"},
              {"ordering", source},
              {"max_delta", max_delta(cp.cnf, ord)},
              {"strategy", a.strategy},
              {"outputs", d.outputs},
              {"truncated", d.truncated},
              {"max_depth", dz.stats().max_depth},
              {"delay", delay_json(d)},
              {"total_ms", static_cast<double>(d.total_ns) / 1e6}};
  emit_report(report, a.report);
  return 0;
}

// -------------------------------------------------------------------- check

struct CheckArgs {
  std::string phi, psi, algorithm = "B", emit_cert, report;
};

int cmd_check(const CheckArgs& a) {
  auto t0 = std::chrono::steady_clock::now();
  MonotoneCnf f = load_cnf(a.phi), g = load_cnf(a.psi);
  int n = std::max(f.n(), g.n());
  fk::DualPair pair(widen(f, n), widen(g, n));
  if (!a.emit_cert.empty() && a.algorithm != "B") throw usage_error("--emit-cert needs --algorithm B");

  bool dual = true;
  std::optional<Assignment> witness;
  json extra;
  if (a.algorithm == "A") {
    fk::AStats st;
    auto r = fk::check_dual_A(pair, &st);
    dual = r.dual;
    witness = r.witness;
    extra = json{{"nodes", st.nodes}, {"max_left_moves", st.max_left}, {"max_right_moves", st.max_right}};
  } else if (a.algorithm == "B") {
    auto r = fk::check_dual_B(pair);
    dual = r.dual;
    witness = r.witness;
    extra = json{{"nodes", r.stats.nodes}, {"leaves", r.stats.leaves}, {"max_a", r.stats.max_a},
                 {"max_b", r.stats.max_b}, {"max_c", r.stats.max_c}};
    if (r.certificate) {
      extra["certificate_bits"] = r.certificate->bit_length();
      if (!a.emit_cert.empty()) {
        std::ofstream out(a.emit_cert);
        if (!out) throw usage_error("cannot write " + a.emit_cert);
        io::write_certificate(out, *r.certificate);
      }
    }
  } else if (a.algorithm == "brute") {
    try {
      auto r = oracle::brute_dual_check(pair.phi, pair.psi);
      dual = r.dual;
      witness = r.witness;
    } catch (const oracle::guard_error& e) {
      throw guard_exit(e.what());
    }
  } else {
    throw usage_error("algorithm must be A, B or brute");
  }

  if (dual) {
    std::cout << "DUAL\n";
  } else {
    if (!pair.is_witness(*witness)) throw std::logic_error("witness failed verification");
    std::cout << "NOT-DUAL\n" << witness->to_string() << '\n';
  }
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  json report{{"command", "check"},    {"instance", json{{"phi", instance_json(pair.phi)}, {"psi", instance_json(pair.psi)}}},
              {"volume", pair.volume()}, {"algorithm", a.algorithm},
              {"dual", dual},           {"stats", extra},
              {"total_ms", ms}};
  if (witness) report["witness"] = witness->to_string();
  emit_report(report, a.report);
  return dual ? 0 : 1;
}

// ------------------------------------------------------------------- verify

int cmd_verify(const std::string& fphi, const std::string& fpsi, const std::string& fcert) {
  MonotoneCnf f = load_cnf(fphi), g = load_cnf(fpsi);
  int n = std::max(f.n(), g.n());
  fk::DualPair pair(widen(f, n), widen(g, n));
  std::ifstream in(fcert);
  if (!in) throw usage_error("cannot open " + fcert);
  fk::Certificate cert;
  try {
    cert = io::read_certificate(in);
  } catch (const io::parse_error& e) {
    throw io::parse_error(e.line(), fcert + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
  auto r = fk::replay_certificate(pair, cert);
  switch (r.outcome) {
    case fk::ReplayOutcome::confirmed:
      std::cout << "CONFIRMED NOT-DUAL\n" << r.witness->to_string() << '\n';
      return 0;
    case fk::ReplayOutcome::refuted:
      std::cout << "REFUTED: " << r.reason << '\n';
      return 1;
    case fk::ReplayOutcome::invalid:
      std::cout << "INVALID: " << r.reason << '\n';
      return 1;
  }
  return 1;
}

// ------------------------------------------------------------------ analyze

std::string join_order(const VariableOrdering& o) {
  std::string s;
  for (int v : o.order()) s += (s.empty() ? "" : " ") + std::to_string(v);
  return s;
}

int cmd_analyze(const std::string& input, const std::string& td_path) {
  MonotoneCnf raw = load_cnf(input);
  MonotoneCnf prime = minimize(raw);
  std::optional<TreeDecomposition> td;
  if (!td_path.empty()) {
    std::ifstream in(td_path);
    if (!in) throw usage_error("cannot open " + td_path);
    td = io::read_td(in);
    if (td->kind == TdKind::type1) td = td1_to_td2(*td, prime);
    if (!validate_td(*td, prime)) throw guard_exit("tree decomposition does not fit the input");
  }
  Analysis a = analyze(prime, td);
  std::cout << "n: " << a.n << '\n' << "m: " << a.m << '\n' << "length: " << a.length << '\n';
  if (!(prime == raw)) std::cout << "minimized: yes\n";
  std::cout << "read: " << a.read << '\n';
  std::cout << "degeneracy: " << a.degeneracy.k << '\n';
  std::cout << "degeneracy-ordering: " << join_order(a.degeneracy.ord) << '\n';
  std::cout << "alpha-acyclic: " << (a.gyo.success ? "yes" : "no") << '\n';
  if (a.gyo_ordering) std::cout << "b-ordering: " << join_order(*a.gyo_ordering) << '\n';
  if (a.td_width) {
    std::cout << "td-width: " << *a.td_width << '\n';
    std::cout << "td-ordering: " << join_order(*a.td_ordering) << '\n';
  }
  std::cout << "chosen-ordering: " << a.chosen_source << " (max |delta| = " << a.chosen_k << ")\n";
  for (const auto& gtee : a.guarantees) std::cout << "guarantee: " << gtee << '\n';
  return 0;
}

// -------------------------------------------------------------------- bench

struct FamilySpec {
  std::string family;
  int param = 0;
  std::vector<int> sizes;
};

// <family>[:<param>]@<n>[,<n>...]
FamilySpec parse_family(const std::string& spec) {
  FamilySpec fs;
  auto at = spec.find('@');
  if (at == std::string::npos) throw usage_error("family spec needs '@<sizes>'");
  std::string head = spec.substr(0, at);
  if (auto colon = head.find(':'); colon != std::string::npos) {
    fs.family = head.substr(0, colon);
    try {
      fs.param = std::stoi(head.substr(colon + 1));
    } catch (const std::exception&) {
      throw usage_error("bad family parameter in '" + spec + "'");
    }
  } else {
    fs.family = head;
  }
  for (int v : parse_perm(spec.substr(at + 1))) {
    if (v < 2) throw usage_error("family sizes must be >= 2");
    fs.sizes.push_back(v);
  }
  static const std::vector<std::string> known{"read", "degenerate", "acyclic", "random", "kcnf"};
  if (std::find(known.begin(), known.end(), fs.family) == known.end())
    throw usage_error("unknown family '" + fs.family + "' (read, degenerate, acyclic, random, kcnf)");
  if (fs.sizes.empty()) throw usage_error("family spec lists no sizes");
  return fs;
}

MonotoneCnf generate(const FamilySpec& fs, int n, gen::Rng& rng) {
  if (fs.family == "read") return gen::read_k(rng, n, fs.param ? fs.param : 2, 3);
  if (fs.family == "degenerate") return gen::k_degenerate(rng, n, fs.param ? fs.param : 2);
  if (fs.family == "acyclic") return gen::acyclic(rng, n);
  if (fs.family == "kcnf") return gen::k_cnf(rng, n, n, fs.param ? fs.param : 3);
  return gen::random_prime(rng, n, fs.param ? fs.param : n, 2, 4);
}

struct BenchArgs {
  std::string spec, output, ordering = "smallest-last", strategy = "auto", report;
  std::uint64_t seed = 1;
  std::size_t limit = 1000;
};

const char* kCsvHeader =
    "family,param,n_requested,n,m,length,degeneracy,outputs,truncated,first_ns,max_ns,mean_ns,p95_ns,total_ns";

int cmd_bench(const BenchArgs& a) {
  FamilySpec fs = parse_family(a.spec);
  RhoStrategy strategy = parse_strategy(a.strategy);
  if (a.ordering != "smallest-last" && a.ordering != "identity" && a.ordering != "gyo")
    throw usage_error("bench ordering must be smallest-last, gyo or identity");
  std::ofstream file;
  if (!a.output.empty()) {
    file.open(a.output);
    if (!file) throw usage_error("cannot write " + a.output);
  }
  std::ostream& csv = a.output.empty() ? std::cout : file;
  csv << kCsvHeader << '\n';
  std::vector<double> xs, ys;
  json rows = json::array();
  for (std::size_t idx = 0; idx < fs.sizes.size(); ++idx) {
    int n = fs.sizes[idx];
    gen::Rng rng(a.seed + idx);
    MonotoneCnf f = generate(fs, n, rng);
    auto deg = smallest_last_ordering(f);
    VariableOrdering ord = deg.ord;
    if (a.ordering == "identity") ord = VariableOrdering::identity(f.n());
    if (a.ordering == "gyo") {
      auto trace = gyo_reduce(f);
      if (!trace.success) throw usage_error("--ordering gyo: generated instance is not alpha-acyclic");
      ord = ordering_from_gyo(trace, f.n());
    }
    Dualizer dz(f, ord, strategy);
    DelayReport d = measure_delay(dz, a.limit);
    csv << fs.family << ',' << fs.param << ',' << n << ',' << f.n() << ',' << f.size() << ',' << f.length() << ','
        << deg.k << ',' << d.outputs << ',' << (d.truncated ? 1 : 0) << ',' << d.first_ns << ',' << d.max_ns << ','
        << static_cast<std::int64_t>(d.mean_ns) << ',' << d.p95_ns << ',' << d.total_ns << '\n';
    if (d.max_ns > 0) {
      xs.push_back(std::log(static_cast<double>(f.n())));
      ys.push_back(std::log(static_cast<double>(d.max_ns)));
    }
  }
  json report{{"command", "bench"}, {"family", fs.family}, {"param", fs.param}, {"seed", a.seed}, {"limit", a.limit}};
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) mx += xs[k], my += ys[k];
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) sxy += (xs[k] - mx) * (ys[k] - my), sxx += (xs[k] - mx) * (xs[k] - mx);
    if (sxx > 0) report["max_delay_exponent"] = sxy / sxx;
  }
  emit_report(report, a.report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone CNF dualization and duality checking"};
  app.require_subcommand(1);

  DualizeArgs da;
  auto* dual = app.add_subcommand("dualize", "Enumerate the prime DNF (minimal transversals) in key order");
  dual->add_option("input", da.input, "Hypergraph file")->required();
  dual->add_option("--ordering", da.ordering, "identity | smallest-last | gyo | td:<file> | given:<v1,v2,...>");
  dual->add_option("--strategy", da.strategy, "auto | expand | recursive[:<budget>]");
  dual->add_flag("--buffer", da.buffer, "Write terms in one block at the end");
  dual->add_option("--limit", da.limit, "Stop after this many terms (0 = all)");
  dual->add_option("--report", da.report, "Write the JSON run report here instead of stderr");

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Decide whether two CNFs are mutually dual");
  check->add_option("phi", ca.phi, "First hypergraph file")->required();
  check->add_option("psi", ca.psi, "Second hypergraph file")->required();
  check->add_option("--algorithm", ca.algorithm, "A | B | brute");
  check->add_option("--emit-cert", ca.emit_cert, "Write the certificate of a NOT-DUAL answer (algorithm B)");
  check->add_option("--report", ca.report, "Write the JSON run report here instead of stderr");

  std::string vphi, vpsi, vcert;
  auto* verify = app.add_subcommand("verify", "Replay a non-duality certificate");
  verify->add_option("phi", vphi)->required();
  verify->add_option("psi", vpsi)->required();
  verify->add_option("certificate", vcert)->required();

  std::string ain, atd;
  auto* an = app.add_subcommand("analyze", "Report structural classes and applicable delay guarantees");
  an->add_option("input", ain)->required();
  an->add_option("--td", atd, "Tree decomposition file");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Delay measurements over a generated family");
  bench->add_option("family", ba.spec, "e.g. read:2@8,16,32,64")->required();
  bench->add_option("--output,-o", ba.output, "CSV file (default stdout)");
  bench->add_option("--seed", ba.seed);
  bench->add_option("--limit", ba.limit, "Terms per instance");
  bench->add_option("--ordering", ba.ordering, "smallest-last | gyo | identity");
  bench->add_option("--strategy", ba.strategy);
  bench->add_option("--report", ba.report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*dual) return cmd_dualize(da);
    if (*check) return cmd_check(ca);
    if (*verify) return cmd_verify(vphi, vpsi, vcert);
    if (*an) return cmd_analyze(ain, atd);
    if (*bench) return cmd_bench(ba);
  } catch (const io::parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const cnf_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const td_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const guard_exit& e) {
    std::cerr << "guard: " << e.what() << '\n';
    return 3;
  } catch (const oracle::guard_error& e) {
    std::cerr << "guard: " << e.what() << '\n';
    return 3;
  } catch (const budget_error& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
