#include "virtheta/identities.hpp"

#include "virtheta/cache.hpp"
#include "virtheta/parse.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <future>
#include <set>
#include <thread>

namespace virtheta {

namespace {

template <class T>
std::vector<T> parallel_map(int jobs, size_t n, const std::function<T(size_t)>& f) {
  std::vector<std::optional<T>> slots(n);
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) slots[i] = f(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::future<void>> workers;
    for (int w = 0; w < std::min<int>(jobs, static_cast<int>(n)); ++w) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (size_t i; (i = next++) < n;) slots[i] = f(i);
      }));
    }
    for (auto& w : workers) w.get();
  }
  std::vector<T> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

QSeries V(i64 r, i64 m, Rational T) { return v_func(r, m, T); }

BigInt sign_of(bool negative) { return BigInt(negative ? -1 : 1); }

VerificationReport bool_report(std::string name, nlohmann::json params, bool pass, Rational T, const Stopwatch& clock) {
  VerificationReport r;
  r.name = std::move(name);
  r.params = std::move(params);
  r.trunc = T;
  r.pass = pass;
  r.wall_time_ms = clock.elapsed_ms();
  return r;
}

std::string vlabel(i64 r, i64 m) { return "V(" + std::to_string(r) + "," + std::to_string(m) + ")"; }

QIdeal ramified_prime(const Field& K, i64 p) {
  Splitting sp = split_prime(K, p);
  if (sp.kind != Splitting::Kind::ramified) throw std::logic_error("expected a ramified prime");
  return sp.primes.front();
}

// Sign of the permutation (i, j, k) of (1, 2, 3); 0 if not a permutation.
int levi_civita(int i, int j, int k) { return (i - j) * (j - k) * (k - i) / 2; }

ClassCombo skew(const ASSets& as, const RayClassRef& J, bool mutate) {
  ClassCombo W = skew_combo(as, J);
  if (mutate) {
    for (auto& [n, x] : W)
      if (n == -1) {
        n = 1;
        break;
      }
  }
  return W;
}

}  // namespace

std::vector<VerificationReport> verify_id1(Rational T, const SuiteOptions& opt) {
  std::vector<VerificationReport> out;
  for (int i = 1; i <= 3; ++i) {
    Stopwatch clock;
    QSeries lhs = V(1, 2, T) * V(4 - 3 * i, 3, T);
    QSeries rhs(1, T);
    bool first = true;
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k) {
        int e = levi_civita(i, j, k);
        if (e == 0) continue;
        int sign = e * ((j + k) % 2 == 0 ? 1 : -1);
        if (opt.mutate && i == 1 && first) sign = -sign;
        first = false;
        rhs += V(5 * j - 16, 4, T) * V(5 * k - 8, 4, T) * BigInt(sign);
      }
    out.push_back(make_report("id1.i" + std::to_string(i), {{"i", i}}, lhs, rhs, T, clock));
  }
  return out;
}

std::vector<VerificationReport> verify_id2(Rational T, const SuiteOptions& opt) {
  struct Line {
    std::string name;
    std::vector<std::pair<int, i64>> eta_side;  // sign, r at m=4
    std::vector<std::pair<int, i64>> left;      // sign, r at m=3
    std::vector<std::pair<int, i64>> right;     // sign, r at m=5
  };
  std::vector<Line> lines = {
      {"id2.l1p", {{1, 1}, {1, 11}}, {{1, 1}, {1, 5}}, {{1, 2}, {-1, 8}}},
      {"id2.l1m", {{1, 1}, {-1, 11}}, {{1, 1}, {-1, 5}}, {{1, 2}, {1, 8}}},
      {"id2.l2p", {{1, -3}, {1, 7}}, {{1, 1}, {1, 5}}, {{1, -4}, {-1, 14}}},
      {"id2.l2m", {{1, -3}, {-1, 7}}, {{1, 1}, {-1, 5}}, {{1, -4}, {1, 14}}},
      {"id2.l3", {{1, 2}}, {{1, 2}}, {{1, 1}, {-1, 19}}},
      {"id2.l4", {{1, 6}}, {{1, 2}}, {{1, 7}, {-1, 13}}},
  };
  QSeries e = eta(T);
  std::vector<VerificationReport> out;
  for (size_t idx = 0; idx < lines.size(); ++idx) {
    const Line& L = lines[idx];
    Stopwatch clock;
    auto combo = [&](const std::vector<std::pair<int, i64>>& terms, i64 m, bool flip_last) {
      QSeries s(1, T);
      for (size_t t = 0; t < terms.size(); ++t) {
        bool neg = terms[t].first < 0;
        if (flip_last && t + 1 == terms.size()) neg = !neg;
        s += V(terms[t].second, m, T) * sign_of(neg);
      }
      return s;
    };
    bool flip = opt.mutate && idx == lines.size() - 2;
    QSeries lhs = e * combo(L.eta_side, 4, false);
    QSeries rhs = combo(L.left, 3, false) * combo(L.right, 5, flip);
    nlohmann::json params = nlohmann::json::object();
    out.push_back(make_report(L.name, params, lhs, rhs, T, clock));
  }
  return out;
}

std::vector<VerificationReport> verify_relations55(i64 norm_bound, const SuiteOptions& opt) {
  Field K(-2), Kp(-1);
  QIdeal P2 = ramified_prime(K, 2), P2p = ramified_prime(Kp, 2);
  struct Line {
    QIdeal F, Fp, J, Jp;
    i64 d;
    i64 v3;
  };
  std::vector<Line> lines = {
      {QIdeal::integer(K, 4) * P2, QIdeal::integer(Kp, 8), QIdeal::unit(K), QIdeal::unit(Kp), 16, 1},
      {QIdeal::integer(K, 4) * P2, QIdeal::integer(Kp, 8), QIdeal::principal(K, QuadInt{1, 2}),
       QIdeal::integer(Kp, 3), 16, 5},
      {QIdeal::integer(K, 4), QIdeal::integer(Kp, 4) * P2p, QIdeal::unit(K), QIdeal::unit(Kp), 8, 2},
  };
  auto run = [&](size_t idx) {
    const Line& L = lines[idx];
    Rational T(norm_bound, L.d);
    Stopwatch clock;
    GroupPtr G = RayClassGroup::make(L.F), Gp = RayClassGroup::make(L.Fp);
    ASSets as = as_sets({-2, -1}, G, opt.cache_dir), asp = as_sets({-1, -2}, Gp, opt.cache_dir);
    bool flip = opt.mutate && idx == 0;
    QSeries lhs = ray_theta(skew(as, ray_class(G, L.J), flip), Rational(L.d), T);
    QSeries rhs = ray_theta(skew_combo(asp, ray_class(Gp, L.Jp)), Rational(L.d), T);
    std::string n = std::to_string(idx + 1);
    nlohmann::json params = {{"F", L.F.to_string()}, {"Fp", L.Fp.to_string()}, {"J", L.J.to_string()},
                             {"Jp", L.Jp.to_string()}, {"d", L.d},          {"norm_bound", norm_bound}};
    std::vector<VerificationReport> r;
    r.push_back(make_report("relations55.line" + n, params, lhs, rhs, T, clock));
    Stopwatch clock2;
    QSeries vprod = V(1, 2, T) * V(L.v3, 3, T);
    r.push_back(make_report("relations55.vform" + n, {{"product", vlabel(1, 2) + "*" + vlabel(L.v3, 3)}}, vprod, lhs,
                            T, clock2));
    return r;
  };
  auto parts = parallel_map<std::vector<VerificationReport>>(opt.jobs, lines.size(), run);
  std::vector<VerificationReport> out;
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  std::stable_partition(out.begin(), out.end(), [](const VerificationReport& r) { return r.name.find(".line") != std::string::npos; });
  return out;
}

Thm51Params make_thm51_params(i64 a, i64 r, int eps, bool experimental) {
  if (a < 1 || a % 2 == 0) throw std::invalid_argument("a must be a positive odd integer");
  if (a % 4 != 1 && !experimental) throw std::invalid_argument("a must be 1 mod 4 (pass --experimental to override)");
  if (eps != 0 && eps != 1) throw std::invalid_argument("eps must be 0 or 1");
  i64 n = arith::add(arith::mul(4, arith::mul(a, a)), 1);
  i64 aprime = 0, p = 0;
  for (auto [q, e] : arith::factor(n)) {
    if (e % 2 == 1) {
      if (p != 0) throw std::invalid_argument("4a^2+1 is not a prime times a square");
      p = q;
    }
  }
  if (p == 0 || n % p != 0) throw std::invalid_argument("4a^2+1 is not a prime times a square");
  aprime = arith::isqrt(n / p);
  if (aprime * aprime * p != n) throw std::invalid_argument("4a^2+1 is not a prime times a square");
  if (r % 2 == 0) throw std::invalid_argument("r must be odd");
  if (std::gcd(r, p) != 1) throw std::invalid_argument("r must be prime to p");
  return {a, p, aprime, arith::mul(4, arith::mul(a, a)), arith::mul(a, aprime), r, eps};
}

QSeries thm51_lhs(const Thm51Params& P, Rational T, bool mutate) {
  i64 two_k = arith::mul(2 * P.m, P.m + 1);
  std::map<i64, QSeries> cache;
  auto Vm = [&](i128 x) -> const QSeries& {
    i64 r = arith::narrow(((x % two_k) + two_k) % two_k);
    r = std::min(r, two_k - r);
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, v_func(r, P.m, T)).first;
    return it->second;
  };
  i64 f = arith::sub(2 * P.a, arith::mul(P.eps, P.p));
  QSeries lhs(1, T);
  bool first = true;
  for (i64 u = 1; u <= (P.p - 1) / 2; ++u) {
    i128 uhat = u + i128{5} * P.p * (1 - u);
    for (i64 v = 0; v < P.c; ++v) {
      const QSeries& a = Vm(i128{P.c} * uhat % two_k * ((P.r + i128{8} * v * P.p) % two_k));
      for (i64 w = 0; w < P.c; ++w) {
        const QSeries& b = Vm(i128{P.c} * uhat % two_k * ((i128{f} * P.r + i128{8} * w * P.p) % two_k));
        QSeries prod = a * b;
        if (mutate && first) prod = -prod;
        first = false;
        lhs += prod;
      }
    }
  }
  return lhs;
}

QSeries thm51_rhs(const Thm51Params& P, Rational T) {
  Field K(-1);
  GroupPtr G = RayClassGroup::make(power(ramified_prime(K, 2), 6 - P.eps));
  QuadInt r{P.r, 0}, delta{1, 4};
  ClassCombo W{{1, ray_class(G, r)}, {-1, ray_class(G, K.mul(r, delta))}};
  return ray_theta(W, Rational(i64{1} << (4 - P.eps)), T);
}

std::vector<VerificationReport> thm51_check(const Thm51Params& P, Rational T, const SuiteOptions& opt) {
  std::vector<VerificationReport> out;
  nlohmann::json params = {{"a", P.a}, {"p", P.p}, {"aprime", P.aprime}, {"m", P.m},
                           {"c", P.c}, {"r", P.r}, {"eps", P.eps}};
  Stopwatch clock;
  QSeries lhs = thm51_lhs(P, T, opt.mutate);
  QSeries rhs = thm51_rhs(P, T);
  out.push_back(make_report("thm51", params, lhs, rhs, T, clock));
  if (P.a == 1) {
    Stopwatch clock2;
    i64 f = std::abs(2 * P.a - P.eps * P.p);
    QSeries vv = V(P.r, 4, T) * V(P.r * f, 4, T) + V(7 * P.r, 4, T) * V(7 * P.r * f, 4, T);
    params["f"] = f;
    out.push_back(make_report("thm51.vv", params, lhs, vv, T, clock2));
  }
  return out;
}

std::vector<VerificationReport> consolidate(const ConsolidateParams& P, Rational T, const SuiteOptions& opt) {
  i64 k = arith::mul(P.m, P.m + 1);
  if (arith::mul(arith::mul(P.c, P.c), P.kprime) != k) throw std::invalid_argument("m(m+1) must equal c^2 k'");
  if (std::gcd(P.b, P.c) != 1) throw std::invalid_argument("b must be prime to c");
  nlohmann::json params = {{"c", P.c}, {"kprime", P.kprime}, {"b", P.b}, {"r", P.r}, {"m", P.m}};
  i64 two_k = 2 * k;
  std::vector<VerificationReport> out;
  {
    Stopwatch clock;
    QSeries lhs(1, T);
    for (i64 j = 0; j < P.c; ++j) {
      i64 ell = arith::narrow(i128{P.c} * P.b % two_k * ((P.r + i128{2} * j * P.kprime) % two_k) % two_k);
      lhs += theta_gen({ell, k}, T) * sign_of(opt.mutate && j == 0);
    }
    QSeries rhs = theta_gen({arith::mul(P.b, P.r), P.kprime}, T);
    out.push_back(make_report("consolidate.theta", params, lhs, rhs, T, clock));
  }
  {
    Stopwatch clock;
    QSeries lhs(1, T);
    for (i64 j = 0; j < P.c; ++j) {
      i64 x = arith::narrow(i128{P.c} * P.b % two_k * ((P.r + i128{2} * j * P.kprime) % two_k) % two_k);
      lhs += V(x, P.m, T) * sign_of(opt.mutate && j == 0);
    }
    i64 br = arith::mul(P.b, P.r);
    QSeries rhs = theta_gen({br, P.kprime}, T) -
                  theta_gen({arith::narrow(i128{br} * (2 * P.m + 1) % (2 * P.kprime)), P.kprime}, T);
    out.push_back(make_report("consolidate.V", params, lhs, rhs, T, clock));
  }
  return out;
}

std::vector<PellSolution> pell_levels(int count, i64 kprime, i64 residue) {
  if (count < 1) throw std::invalid_argument("count must be positive");
  BigInt n = 4 * BigInt(static_cast<long>(kprime));
  BigInt x1, c1;
  for (long c = 1;; ++c) {
    BigInt t = n * c * c + 1;
    BigInt s = sqrt(t);
    if (s * s == t) {
      x1 = s;
      c1 = c;
      break;
    }
    if (c > 10'000'000) throw std::runtime_error("fundamental solution not found");
  }
  std::vector<PellSolution> out;
  BigInt x = x1, c = c1, mod = 2 * BigInt(static_cast<long>(kprime));
  for (int iter = 0; static_cast<int>(out.size()) < count; ++iter) {
    if (iter > 100000) throw std::runtime_error("no Pell solutions in the requested residue class");
    BigInt rem = x % mod;
    if (c > 1 && rem == residue) {
      PellSolution sol{(x - 1) / 2, c};
      if (sol.m * (sol.m + 1) != BigInt(static_cast<long>(kprime)) * c * c || x * x - n * c * c != 1)
        throw std::logic_error("Pell re-verification failed");
      out.push_back(sol);
    }
    BigInt nx = x1 * x + n * c1 * c, nc = x1 * c + c1 * x;
    x = nx;
    c = nc;
  }
  return out;
}

Sec54Data sec54_data(const SuiteOptions& opt) {
  Field K(-30), Kp(-10);
  QIdeal F = ramified_prime(K, 5) * ramified_prime(K, 3) * QIdeal::integer(K, 4) * ramified_prime(K, 2);
  QIdeal Fp = ramified_prime(Kp, 5) * QIdeal::integer(Kp, 3) * QIdeal::integer(Kp, 4) * ramified_prime(Kp, 2);
  Sec54Data d{class_number(K), class_number(Kp), RayClassGroup::make(F), RayClassGroup::make(Fp), {}, {}};
  d.as = as_sets({-30, -10}, d.G, opt.cache_dir);
  d.as_prime = as_sets({-10, -30}, d.Gp, opt.cache_dir);
  return d;
}

namespace {

std::vector<std::pair<QIdeal, QuadInt>> crt3(const Field& K, bool primed, QuadInt x, QuadInt y, QuadInt z) {
  QIdeal c1 = ramified_prime(K, 5);
  QIdeal c2 = primed ? QIdeal::integer(K, 3) : ramified_prime(K, 3);
  QIdeal c3 = QIdeal::integer(K, 4) * ramified_prime(K, 2);
  return {{c1, x}, {c2, y}, {c3, z}};
}

std::set<ClassSig> sigs(const std::vector<RayClassRef>& xs) {
  std::set<ClassSig> s;
  for (const auto& x : xs) s.insert(x.sig);
  return s;
}

std::set<ClassSig> translate(const std::vector<RayClassRef>& xs, const RayClassRef& g) {
  std::set<ClassSig> s;
  for (const auto& x : xs) s.insert((x * g).sig);
  return s;
}

}  // namespace

std::vector<VerificationReport> verify_sec54(Rational T, const SuiteOptions& opt) {
  std::vector<VerificationReport> out;
  Stopwatch clock;
  Sec54Data data = sec54_data(opt);
  const Field& K = data.G->field();
  const Field& Kp = data.Gp->field();
  out.push_back(bool_report("sec54.class_groups", {{"h", data.h}, {"hp", data.h_prime}},
                            data.h == 4 && data.h_prime == 2, T, clock));

  QuadInt one{1, 0}, mone{-1, 0}, mu{1, 2};
  QuadInt three_mu = 3 * mu;
  auto cls = [&](QuadInt x, QuadInt y, QuadInt z) { return crt_class(data.G, crt3(K, false, x, y, z)); };
  auto clsp = [&](QuadInt x, QuadInt y, QuadInt z) { return crt_class(data.Gp, crt3(Kp, true, x, y, z)); };

  Stopwatch c2;
  std::vector<RayClassRef> A_listed = {cls(one, one, one), cls(one, one, mone), cls(mone, one, three_mu),
                                       cls(mone, one, -three_mu)};
  bool a_ok = sigs(A_listed) == sigs(data.as.A) && data.as.A.size() == 4;
  out.push_back(bool_report("sec54.A_listing", {{"size", data.as.A.size()}}, a_ok, T, c2));
  Stopwatch c3;
  bool s_ok = sigs(data.as.S) == translate(data.as.A, cls(one, one, -three_mu)) &&
              sigs(data.as.S) == translate(data.as.A, cls(mone, one, one));
  out.push_back(bool_report("sec54.S_cosets", {{"size", data.as.S.size()}}, s_ok, T, c3));

  Stopwatch c4;
  QuadInt sq{0, 1}, mup{1, 2};
  std::vector<RayClassRef> Ap_listed;
  for (i64 sgn : {1, -1}) {
    Ap_listed.push_back(clsp(one, sgn * one, one));
    Ap_listed.push_back(clsp(one, sgn * sq, mone));
    Ap_listed.push_back(clsp(one, sgn * one, 3 * mup));
    Ap_listed.push_back(clsp(one, sgn * sq, -3 * mup));
  }
  bool ap_ok = sigs(Ap_listed) == sigs(data.as_prime.A) && data.as_prime.A.size() == 8;
  out.push_back(bool_report("sec54.Aprime_listing", {{"size", data.as_prime.A.size()}}, ap_ok, T, c4));
  Stopwatch c5;
  bool sp_ok = sigs(data.as_prime.S) == translate(data.as_prime.A, clsp(one, one, -3 * mup)) &&
               sigs(data.as_prime.S) == translate(data.as_prime.A, clsp(one, one, mone)) &&
               sigs(data.as_prime.S) == translate(data.as_prime.A, clsp(one, mone, mone));
  out.push_back(bool_report("sec54.Sprime_cosets", {{"size", data.as_prime.S.size()}}, sp_ok, T, c5));

  struct Row {
    i64 s, r, t;
  };
  std::vector<Row> rows = {{1, 1, 1}, {-11, -5, 1}, {-3, -5, 13}, {-7, 1, 13}};
  RayClassRef P13 = ray_class(data.G, named_prime(K, 13));
  RayClassRef P13p = ray_class(data.Gp, named_prime(Kp, 13));
  Rational d(240);
  auto run = [&](size_t idx) {
    const Row& row = rows[idx];
    std::string n = "sec54.row" + std::to_string(idx + 1);
    nlohmann::json params = {{"s", row.s}, {"r", row.r}, {"t", row.t}, {"d", 240}};
    bool flip = opt.mutate && idx == 0;
    std::vector<VerificationReport> r;
    Stopwatch ca;
    RayClassRef J = P13 * cls({row.s, 0}, one, {2 - row.s, 0});
    RayClassRef Jp = P13p * clsp({row.t, 0}, one, {row.r, 0});
    QSeries lhs = ray_theta(skew(data.as, J, flip), d, T);
    QSeries rhs = ray_theta(skew_combo(data.as_prime, Jp), d, T);
    r.push_back(make_report(n + ".identity", params, lhs, rhs, T, ca));
    Stopwatch cb;
    QSeries vl = V(1, 2, T) * V(row.s, 4, T) * BigInt(2);
    r.push_back(make_report(n + ".lhs_reduction", params, vl, lhs, T, cb));
    Stopwatch cc;
    QSeries vv = V(row.r, 3, T) * V(2 * row.t, 5, T) + V(-5 * row.r, 3, T) * V(32 * row.t, 5, T) * sign_of(flip);
    r.push_back(make_report(n + ".rhs_reduction", params, vv * BigInt(2), rhs, T, cc));
    return r;
  };
  auto parts = parallel_map<std::vector<VerificationReport>>(opt.jobs, rows.size(), run);
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  return out;
}

QSeries pool_series(const PoolItem& item, Rational T) {
  QSeries s = QSeries::constant(1, T);
  for (auto [r, m] : item.factors) s = s * v_func(r, m, T);
  return s;
}

nlohmann::json Relation::to_json() const {
  nlohmann::json terms_json = nlohmann::json::array();
  for (const auto& [c, label] : terms) terms_json.push_back({bigint_to_json(c), label});
  return {{"status", status}, {"terms", terms_json}};
}

std::vector<Relation> search_relations(const SearchConfig& cfg) {
  if (cfg.pool.empty()) throw std::invalid_argument("search pool is empty");
  auto series = parallel_map<QSeries>(cfg.jobs, cfg.pool.size(),
                                      [&](size_t i) { return pool_series(cfg.pool[i], cfg.trunc); });
  i64 L = 1;
  for (const auto& s : series) L = arith::lcm(L, s.denom());
  std::set<i64> grid;
  std::vector<QSeries> scaled;
  for (const auto& s : series) {
    scaled.push_back(s.rescaled(L));
    for (const auto& [n, c] : scaled.back().terms()) grid.insert(n);
  }
  size_t rows = grid.size(), cols = series.size();
  if (static_cast<i64>(rows) * static_cast<i64>(cols) > cfg.max_cells)
    throw std::length_error("search matrix exceeds the configured size guard");
  std::map<i64, size_t> row_of;
  for (i64 n : grid) row_of.emplace(n, row_of.size());
  std::vector<std::vector<mpq_class>> M(rows, std::vector<mpq_class>(cols));
  for (size_t j = 0; j < cols; ++j)
    for (const auto& [n, c] : scaled[j].terms()) M[row_of.at(n)][j] = c;

  std::vector<int> pivot_col_of_row;
  std::vector<bool> is_pivot(cols, false);
  size_t r = 0;
  for (size_t j = 0; j < cols && r < rows; ++j) {
    size_t p = r;
    while (p < rows && M[p][j] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    mpq_class inv = 1 / M[r][j];
    for (size_t k = j; k < cols; ++k) M[r][k] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][j] == 0) continue;
      mpq_class f = M[i][j];
      for (size_t k = j; k < cols; ++k) M[i][k] -= f * M[r][k];
    }
    pivot_col_of_row.push_back(static_cast<int>(j));
    is_pivot[j] = true;
    ++r;
  }

  std::vector<Relation> out;
  for (size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<mpq_class> v(cols, 0);
    v[f] = 1;
    for (size_t i = 0; i < pivot_col_of_row.size(); ++i) v[pivot_col_of_row[i]] = -M[i][f];
    BigInt den = 1, g = 0;
    for (const auto& x : v) den = lcm(den, BigInt(x.get_den()));
    std::vector<BigInt> iv;
    for (const auto& x : v) {
      mpq_class y = x * den;
      iv.push_back(y.get_num());
      g = gcd(g, BigInt(y.get_num()));
    }
    Relation rel;
    bool bounded = true;
    for (size_t j = 0; j < cols; ++j) {
      if (iv[j] == 0) continue;
      BigInt c = iv[j] / g;
      if (abs(c) > cfg.coeff_bound) bounded = false;
      rel.terms.emplace_back(c, cfg.pool[j].label);
    }
    if (bounded) out.push_back(std::move(rel));
  }
  return out;
}

namespace {

PoolItem product_item(std::vector<std::pair<i64, i64>> factors) {
  std::string label;
  for (auto [r, m] : factors) label += (label.empty() ? "" : "*") + vlabel(r, m);
  return {label, std::move(factors)};
}

}  // namespace

std::vector<PoolItem> id1_pool() {
  std::vector<PoolItem> pool;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k)
        if (levi_civita(i, j, k) != 0) pool.push_back(product_item({{5 * j - 16, 4}, {5 * k - 8, 4}}));
  for (int i = 1; i <= 3; ++i) pool.push_back(product_item({{1, 2}, {4 - 3 * i, 3}}));
  return pool;
}

std::vector<PoolItem> id24_pool() {
  struct Row {
    i64 s, r, t;
  };
  std::vector<Row> rows = {{1, 1, 1}, {-11, -5, 1}, {-3, -5, 13}, {-7, 1, 13}};
  std::vector<PoolItem> pool;
  for (const auto& row : rows) {
    pool.push_back(product_item({{row.r, 3}, {2 * row.t, 5}}));
    pool.push_back(product_item({{-5 * row.r, 3}, {32 * row.t, 5}}));
  }
  for (const auto& row : rows) pool.push_back(product_item({{1, 2}, {row.s, 4}}));
  return pool;
}

std::vector<VerificationReport> verify_pell(int count, Rational T, const SuiteOptions& opt) {
  struct Job {
    std::string name;
    PellSolution sol;
    i64 kprime;
  };
  std::vector<Job> jobs;
  auto main_levels = pell_levels(count);
  for (size_t i = 0; i < main_levels.size(); ++i) jobs.push_back({"pell.level" + std::to_string(i + 1), main_levels[i], 12});
  auto companion = pell_levels(count, 6, 5);
  for (size_t i = 0; i < companion.size(); ++i)
    jobs.push_back({"pell.companion" + std::to_string(i + 1), companion[i], 6});
  auto run = [&](size_t idx) {
    const Job& job = jobs[idx];
    if (!job.sol.m.fits_slong_p() || !job.sol.c.fits_slong_p()) throw std::length_error("Pell level exceeds 64 bits");
    ConsolidateParams P{job.sol.c.get_si(), job.kprime, 1, 1, job.sol.m.get_si()};
    SuiteOptions inner = opt;
    inner.mutate = opt.mutate && idx == 0;
    auto reports = consolidate(P, T, inner);
    for (auto& r : reports) r.name = job.name + r.name.substr(r.name.find('.'));
    return reports;
  };
  auto parts = parallel_map<std::vector<VerificationReport>>(opt.jobs, jobs.size(), run);
  std::vector<VerificationReport> out;
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  return out;
}

std::vector<VerificationReport> verify_search(Rational T, const SuiteOptions& opt) {
  struct Target {
    std::string name;
    std::vector<PoolItem> pool;
    size_t expected;
  };
  std::vector<Target> targets = {{"search.id1", id1_pool(), 3}, {"search.id24", id24_pool(), 4}};
  std::vector<VerificationReport> out;
  for (const auto& t : targets) {
    Stopwatch clock;
    SearchConfig cfg;
    cfg.pool = t.pool;
    cfg.trunc = T;
    cfg.jobs = opt.jobs;
    auto rels = search_relations(cfg);
    out.push_back(bool_report(t.name + ".count", {{"expected", t.expected}, {"found", rels.size()}},
                              rels.size() == t.expected, T, clock));
    std::map<std::string, const PoolItem*> by_label;
    for (const auto& item : t.pool) by_label[item.label] = &item;
    Rational T2 = T * Rational(2);
    for (size_t i = 0; i < rels.size(); ++i) {
      Stopwatch clock2;
      QSeries lhs(1, T2);
      for (size_t j = 0; j < rels[i].terms.size(); ++j) {
        BigInt c = rels[i].terms[j].first;
        if (opt.mutate && i == 0 && j == 0) c = -c;
        lhs += pool_series(*by_label.at(rels[i].terms[j].second), T2) * c;
      }
      nlohmann::json params = {{"relation", rels[i].to_json()}};
      out.push_back(make_report(t.name + ".rel" + std::to_string(i + 1), params, lhs, QSeries(1, T2), T2, clock2));
    }
  }
  return out;
}

}  // namespace virtheta
