#include "virtheta/cli.hpp"

#include "virtheta/cache.hpp"
#include "virtheta/identities.hpp"
#include "virtheta/parse.hpp"

#include <CLI11.hpp>

#include <future>
#include <iomanip>
#include <optional>
#include <regex>
#include <sstream>

namespace virtheta {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

constexpr const char* kFooter = R"(Commands:
  verify SUITE...          run suites (id1 id2 relations55 thm51 consolidate pell sec54 search, or all)
  dump theta|v|eta|char|rayclass|class
  search                   integer relations among V-products (--pool id1|id24 or --product r:m,r:m ...)
  cache stats|clear        inspect or empty the A/S cache given by --cache

Truncations are exact rationals: --trunc 20/1, --trunc 5/2, --trunc 7.
Exit status: 0 all PASS, 1 some FAIL, 2 bad arguments or unknown suite, 3 internal or bound failure.

Ideals: products of integers, named primes P<p>[bar] and generator lists (a+b*w,c+d*w), joined by '*' or
juxtaposition, each optionally ^e. Elements use w for the field's omega and s for sqrt(D).
Named primes:
  D=-2   P3  = (1+w)
  D=-30  P13 = (10+w)/(P2 P5)
  D=-10  P13 = (5+2w)/P5
  otherwise the prime above p with the smallest HNF b (the inert prime (p) when p is inert); Pbar is its conjugate.
Class specs: [elem] and [ideal] items with optional ^e joined by '*', optionally ending in a CRT item
  [r1,...,rn]@F=f1*...*fn, e.g. "[P13]*[1,1,-1]@F=P5*P3*4P2".
A config file (--config FILE) holds key=value lines naming long options; flags on the command line win.)";

struct Options {
  std::string command;
  std::vector<std::string> args;
  std::optional<std::string> trunc;
  std::optional<i64> bound;
  bool json = false;
  bool no_timing = false;
  std::string cache;
  int jobs = 1;
  std::optional<i64> a, r, eps;
  bool experimental = false;
  bool mutate = false;
  std::optional<i64> D, Dp;
  std::string F, spec, pool = "id1";
  std::vector<std::string> products;
  std::optional<i64> ell, k, m, s, c, kprime, b;
  int count = 2;
  i64 coeff_bound = 1000;
};

Rational parse_trunc(const std::string& text) {
  Rational t;
  try {
    t = arith::parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError("truncation must be an exact rational num/den: " + text);
  }
  if (t <= Rational(0)) throw UsageError("truncation must be positive");
  return t;
}

Rational trunc_or(const Options& o, Rational fallback) { return o.trunc ? parse_trunc(*o.trunc) : fallback; }

i64 need(const std::optional<i64>& v, const std::string& flag) {
  if (!v) throw UsageError("missing --" + flag);
  return *v;
}

SuiteOptions suite_options(const Options& o) {
  SuiteOptions s;
  s.mutate = o.mutate;
  s.jobs = o.jobs;
  s.experimental = o.experimental;
  s.cache_dir = o.cache;
  return s;
}

using Reports = std::vector<VerificationReport>;

Reports run_thm51(const Options& o, const SuiteOptions& so) {
  if (!o.a && !o.r && !o.eps) {
    Reports out;
    for (auto [r, e] : std::vector<std::pair<i64, int>>{{1, 0}, {3, 0}, {1, 1}}) {
      auto part = thm51_check(make_thm51_params(1, r, e), trunc_or(o, Rational(20)), so);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  i64 a = o.a.value_or(1);
  Thm51Params P = make_thm51_params(a, o.r.value_or(1), static_cast<int>(o.eps.value_or(0)), o.experimental);
  return thm51_check(P, trunc_or(o, Rational(a == 1 ? 20 : 2)), so);
}

Reports run_consolidate(const Options& o, const SuiteOptions& so) {
  Rational T = trunc_or(o, Rational(10));
  if (o.m || o.c || o.kprime) {
    ConsolidateParams P{need(o.c, "c"), need(o.kprime, "kprime"), o.b.value_or(1), o.r.value_or(1), need(o.m, "m")};
    return consolidate(P, T, so);
  }
  Reports out = consolidate({99, 6, 1, 1, 242}, T, so);
  for (i64 r : {1, -2, -5}) {
    SuiteOptions inner = so;
    inner.mutate = false;
    auto part = consolidate({195, 12, 1, r, 675}, T, inner);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Reports run_suite(const std::string& name, const Options& o) {
  SuiteOptions so = suite_options(o);
  if (name == "id1") return verify_id1(trunc_or(o, Rational(20)), so);
  if (name == "id2") return verify_id2(trunc_or(o, Rational(20)), so);
  if (name == "relations55") return verify_relations55(o.bound.value_or(160), so);
  if (name == "thm51") return run_thm51(o, so);
  if (name == "consolidate") return run_consolidate(o, so);
  if (name == "pell") return verify_pell(o.count, trunc_or(o, Rational(10)), so);
  if (name == "sec54") return verify_sec54(trunc_or(o, Rational(4)), so);
  if (name == "search") return verify_search(trunc_or(o, Rational(20)), so);
  throw std::logic_error("unregistered suite " + name);
}

std::string rational_str(const Rational& q) { return arith::to_string(q); }

void print_table(const Reports& reports, std::ostream& out) {
  size_t width = 4;
  for (const auto& r : reports) width = std::max(width, r.name.size());
  out << std::left << std::setw(7) << "STATUS" << std::setw(static_cast<int>(width) + 2) << "NAME" << std::setw(10)
      << "TRUNC" << std::setw(30) << "FIRST MISMATCH" << "TIME(ms)\n";
  for (const auto& r : reports) {
    std::string mism = "-";
    if (r.first_mismatch) {
      std::ostringstream m;
      m << "q^" << rational_str(r.first_mismatch->exponent) << ": " << r.first_mismatch->lhs.get_str() << " vs "
        << r.first_mismatch->rhs.get_str();
      mism = m.str();
    }
    std::ostringstream t;
    t << std::fixed << std::setprecision(1) << r.wall_time_ms;
    out << std::setw(7) << (r.pass ? "PASS" : "FAIL") << std::setw(static_cast<int>(width) + 2) << r.name
        << std::setw(10) << rational_str(r.trunc) << std::setw(30) << mism << t.str() << "\n";
  }
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.args.empty()) throw UsageError("verify needs at least one suite");
  std::vector<std::string> suites;
  for (const auto& s : o.args) {
    if (s == "all") {
      suites.insert(suites.end(), suite_registry().begin(), suite_registry().end());
    } else if (std::find(suite_registry().begin(), suite_registry().end(), s) != suite_registry().end()) {
      suites.push_back(s);
    } else {
      err << "unknown suite: " << s << "\n";
      return kExitUsage;
    }
  }
  if (o.trunc) parse_trunc(*o.trunc);

  struct Outcome {
    Reports reports;
    std::string error;
    int code = kExitPass;
  };
  auto run_one = [&](const std::string& name) {
    Outcome res;
    try {
      res.reports = run_suite(name, o);
    } catch (const UsageError& e) {
      res.error = e.what();
      res.code = kExitUsage;
    } catch (const ParseError& e) {
      res.error = e.what();
      res.code = kExitUsage;
    } catch (const BoundError& e) {
      res.error = e.what();
      res.code = kExitInternal;
    } catch (const std::invalid_argument& e) {
      res.error = e.what();
      res.code = kExitUsage;
    } catch (const std::exception& e) {
      res.error = e.what();
      res.code = kExitInternal;
    }
    return res;
  };
  std::vector<Outcome> outcomes;
  if (o.jobs > 1 && suites.size() > 1) {
    std::vector<std::future<Outcome>> futures;
    for (const auto& s : suites) futures.push_back(std::async(std::launch::async, run_one, s));
    for (auto& f : futures) outcomes.push_back(f.get());
  } else {
    for (const auto& s : suites) outcomes.push_back(run_one(s));
  }

  Reports all;
  nlohmann::json errors = nlohmann::json::array();
  int code = kExitPass;
  for (size_t i = 0; i < suites.size(); ++i) {
    for (auto r : outcomes[i].reports) {
      if (o.no_timing) r.wall_time_ms = 0;
      all.push_back(std::move(r));
    }
    if (!outcomes[i].error.empty()) {
      errors.push_back({{"suite", suites[i]}, {"error", outcomes[i].error}});
      code = std::max(code, outcomes[i].code);
    }
  }
  bool pass = std::all_of(all.begin(), all.end(), [](const auto& r) { return r.pass; });
  if (code == kExitPass && !pass) code = kExitFail;

  if (o.json) {
    nlohmann::json doc = {{"pass", pass && errors.empty()}, {"errors", errors}};
    doc["reports"] = nlohmann::json::array();
    for (const auto& r : all) doc["reports"].push_back(r.to_json());
    out << doc.dump(2) << "\n";
  } else {
    print_table(all, out);
    size_t passed = std::count_if(all.begin(), all.end(), [](const auto& r) { return r.pass; });
    out << passed << " passed, " << all.size() - passed << " failed\n";
  }
  for (const auto& e : errors) err << "error in " << e["suite"].get<std::string>() << ": " << e["error"].get<std::string>() << "\n";
  return code;
}

GroupPtr group_from(const Options& o) {
  Field K(need(o.D, "D"));
  if (o.F.empty()) throw UsageError("missing --F");
  return RayClassGroup::make(parse_ideal(K, o.F));
}

int cmd_dump(const Options& o, std::ostream& out) {
  if (o.args.size() != 1) throw UsageError("dump needs exactly one kind");
  const std::string& kind = o.args[0];
  nlohmann::json doc;
  if (kind == "theta") {
    doc = to_json(theta_gen({need(o.ell, "ell"), need(o.k, "k")}, trunc_or(o, Rational(10))));
  } else if (kind == "v") {
    doc = to_json(v_func(need(o.r, "r"), need(o.m, "m"), trunc_or(o, Rational(10))));
  } else if (kind == "eta") {
    doc = to_json(eta(trunc_or(o, Rational(10))));
  } else if (kind == "char") {
    doc = to_json(virasoro_char(need(o.r, "r"), need(o.s, "s"), need(o.m, "m"), trunc_or(o, Rational(10))));
  } else if (kind == "rayclass") {
    GroupPtr G = group_from(o);
    CharacterPsi chi{need(o.D, "D"), need(o.Dp, "Dp")};
    doc = as_sets_to_json(chi, G, as_sets(chi, G, o.cache));
    doc["order"] = G->order();
    doc["w_F"] = G->w_F();
  } else if (kind == "class") {
    GroupPtr G = group_from(o);
    if (o.spec.empty()) throw UsageError("missing --spec");
    RayClassRef x = parse_class(G, o.spec);
    QIdeal key = x.canonical_key();
    Lattice2 L = key.lattice();
    doc = {{"canonical_key", key.to_string()}, {"hnf", {L.A, L.B, L.C}}, {"order", G->order()}};
  } else {
    throw UsageError("unknown dump kind: " + kind);
  }
  out << doc.dump(2) << "\n";
  return kExitPass;
}

std::vector<PoolItem> products_pool(const std::vector<std::string>& products) {
  static const std::regex factor_re(R"(\s*(-?\d+)\s*:\s*(\d+)\s*)");
  std::vector<PoolItem> pool;
  for (const auto& text : products) {
    PoolItem item;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
      std::smatch mt;
      if (!std::regex_match(part, mt, factor_re)) throw UsageError("product factors are r:m pairs: " + text);
      i64 r = std::stoll(mt[1]), m = std::stoll(mt[2]);
      item.factors.emplace_back(r, m);
      item.label += (item.label.empty() ? "" : "*") + std::string("V(") + std::to_string(r) + "," + std::to_string(m) + ")";
    }
    pool.push_back(std::move(item));
  }
  return pool;
}

int cmd_search(const Options& o, std::ostream& out) {
  SearchConfig cfg;
  if (!o.products.empty()) {
    cfg.pool = products_pool(o.products);
  } else if (o.pool == "id1") {
    cfg.pool = id1_pool();
  } else if (o.pool == "id24") {
    cfg.pool = id24_pool();
  } else {
    throw UsageError("unknown pool: " + o.pool);
  }
  cfg.trunc = trunc_or(o, Rational(20));
  cfg.coeff_bound = o.coeff_bound;
  cfg.jobs = o.jobs;
  nlohmann::json rels = nlohmann::json::array();
  for (const auto& r : search_relations(cfg)) rels.push_back(r.to_json());
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& p : cfg.pool) labels.push_back(p.label);
  out << nlohmann::json{{"pool", labels}, {"relations", rels}, {"trunc", rational_to_json(cfg.trunc)}}.dump(2) << "\n";
  return kExitPass;
}

int cmd_cache(const Options& o, std::ostream& out) {
  if (o.args.size() != 1) throw UsageError("cache needs stats or clear");
  if (o.cache.empty()) throw UsageError("cache commands need --cache DIR");
  ASCache cache(o.cache);
  if (o.args[0] == "stats") {
    auto s = cache.stats();
    out << nlohmann::json{{"dir", o.cache}, {"entries", s.entries}, {"bytes", s.bytes}}.dump(2) << "\n";
  } else if (o.args[0] == "clear") {
    out << nlohmann::json{{"dir", o.cache}, {"removed", cache.clear()}}.dump(2) << "\n";
  } else {
    throw UsageError("unknown cache action: " + o.args[0]);
  }
  return kExitPass;
}

// Single-dash spellings of the field flags.
std::vector<std::string> normalize(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) out.push_back(a == "-D" || a == "-Dp" || a == "-F" ? "-" + a : a);
  return out;
}

}  // namespace

const std::vector<std::string>& suite_registry() {
  static const std::vector<std::string> names = {"id1", "id2", "relations55", "thm51", "consolidate", "pell", "sec54", "search"};
  return names;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact q-series and ray class theta identity checker", "virtheta"};
  app.footer(kFooter);
  Options o;
  app.add_option("command", o.command, "verify | dump | search | cache")->required();
  app.add_option("args", o.args, "suites, dump kind, or cache action");
  app.add_option("--trunc", o.trunc, "truncation num/den");
  app.add_option("--bound", o.bound, "ideal norm bound for relations55");
  app.add_flag("--json", o.json, "JSON report instead of a table");
  app.add_flag("--no-timing", o.no_timing, "report wall_time_ms as 0");
  app.add_option("--cache", o.cache, "A/S cache directory");
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--a", o.a, "thm51 parameter a");
  app.add_option("--r", o.r, "thm51/consolidate/dump residue r");
  app.add_option("--eps", o.eps, "thm51 epsilon (0 or 1)");
  app.add_flag("--experimental", o.experimental, "allow thm51 with a = 3 mod 4");
  app.add_flag("--mutate", o.mutate, "flip one sign per suite (negative control)");
  app.add_option("--D", o.D, "field discriminant parameter D");
  app.add_option("--Dp", o.Dp, "partner field D'");
  app.add_option("--F", o.F, "conductor, e.g. 4*P2");
  app.add_option("--spec", o.spec, "class spec for dump class");
  app.add_option("--ell", o.ell, "theta index");
  app.add_option("--k", o.k, "theta level");
  app.add_option("--m", o.m, "V/character level m");
  app.add_option("--s", o.s, "character index s");
  app.add_option("--c", o.c, "consolidate c");
  app.add_option("--kprime", o.kprime, "consolidate k'");
  app.add_option("--b", o.b, "consolidate b");
  app.add_option("--count", o.count, "number of Pell levels")->check(CLI::PositiveNumber);
  app.add_option("--pool", o.pool, "search pool: id1 or id24");
  app.add_option("--product", o.products, "search pool item r:m,r:m,...");
  app.add_option("--coeff-bound", o.coeff_bound, "largest relation coefficient kept");
  app.set_config("--config", "", "key=value config file");

  std::vector<std::string> args = normalize(raw_args);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (o.command == "verify") return cmd_verify(o, out, err);
    if (o.command == "dump") return cmd_dump(o, out);
    if (o.command == "search") return cmd_search(o, out);
    if (o.command == "cache") return cmd_cache(o, out);
    err << "unknown command: " << o.command << "\n";
    return kExitUsage;
  } catch (const BoundError& e) {
    err << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace virtheta
