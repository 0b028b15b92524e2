#pragma once

#include "virtheta/bridge.hpp"

namespace virtheta {

// Shared knobs for every suite. `mutate` flips the sign of one term (negative control).
struct SuiteOptions {
  bool mutate = false;
  int jobs = 1;
  bool experimental = false;
  // A/S cache directory; empty disables caching.
  std::string cache_dir;
};

std::vector<VerificationReport> verify_id1(Rational trunc, const SuiteOptions& opt = {});
std::vector<VerificationReport> verify_id2(Rational trunc, const SuiteOptions& opt = {});
// Ideal norms are enumerated up to norm_bound on both sides of every line.
std::vector<VerificationReport> verify_relations55(i64 norm_bound, const SuiteOptions& opt = {});

struct Thm51Params {
  i64 a, p, aprime, m, c, r;
  int eps;
};

// Validates and completes (a, r, eps); a ≡ 3 mod 4 needs opt.experimental.
Thm51Params make_thm51_params(i64 a, i64 r, int eps, bool experimental = false);
QSeries thm51_lhs(const Thm51Params& P, Rational trunc, bool mutate = false);
QSeries thm51_rhs(const Thm51Params& P, Rational trunc);
std::vector<VerificationReport> thm51_check(const Thm51Params& P, Rational trunc, const SuiteOptions& opt = {});

struct ConsolidateParams {
  i64 c, kprime, b, r, m;
};
std::vector<VerificationReport> consolidate(const ConsolidateParams& P, Rational trunc, const SuiteOptions& opt = {});

struct PellSolution {
  BigInt m, c;
};
// Solutions of m(m+1) = kprime·c^2 with c > 1 and 2m+1 ≡ residue mod 2·kprime, in increasing order.
std::vector<PellSolution> pell_levels(int count, i64 kprime = 12, i64 residue = 7);

// Consolidation check at every Pell level: k'=12 levels against V(1,3), then the k'=6 companion levels against η.
std::vector<VerificationReport> verify_pell(int count, Rational trunc, const SuiteOptions& opt = {});

struct Sec54Data {
  i64 h, h_prime;
  GroupPtr G, Gp;
  ASSets as, as_prime;
};
Sec54Data sec54_data(const SuiteOptions& opt = {});
std::vector<VerificationReport> verify_sec54(Rational trunc, const SuiteOptions& opt = {});

// A product of V functions, each factor (r, m).
struct PoolItem {
  std::string label;
  std::vector<std::pair<i64, i64>> factors;
};

struct SearchConfig {
  std::vector<PoolItem> pool;
  Rational trunc{20};
  i64 coeff_bound = 1000;
  i64 max_cells = 50'000'000;
  int jobs = 1;
};

struct Relation {
  std::vector<std::pair<BigInt, std::string>> terms;
  std::string status = "CANDIDATE";
  nlohmann::json to_json() const;
};

std::vector<Relation> search_relations(const SearchConfig& cfg);
QSeries pool_series(const PoolItem& item, Rational trunc);

// Runs the search over both regression pools; each recovered relation is re-checked at twice the truncation.
std::vector<VerificationReport> verify_search(Rational trunc, const SuiteOptions& opt = {});

// Pools used as regression targets.
std::vector<PoolItem> id1_pool();
std::vector<PoolItem> id24_pool();

}  // namespace virtheta
