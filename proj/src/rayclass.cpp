#include "virtheta/rayclass.hpp"

#include <algorithm>

namespace virtheta {

Conductor::Conductor(const QIdeal& F) : F_(F) {
  if (!F.is_integral()) throw std::invalid_argument("conductor must be an integral ideal");
  factors_ = factor_ideal(F);
  self_conj_ = F.conj() == F;
  norm_ = F.norm_integral();
}

bool Conductor::coprime_to(const QIdeal& I) const {
  for (const auto& [P, e] : factors_)
    if (valuation(I, P) != 0) return false;
  return true;
}

ResidueRing::ResidueRing(const Conductor& F) : K_(F.field()), L_(F.ideal().lattice()), phi_(1) {
  for (const auto& [P, e] : F.factorization()) {
    i64 n = P.norm_integral();
    for (int i = 1; i < e; ++i) phi_ = arith::mul(phi_, n);
    phi_ = arith::mul(phi_, n - 1);
  }
}

QuadInt ResidueRing::reduce(QuadInt x) const {
  i64 k = arith::floor_div(x.b, L_.C);
  x = x - k * QuadInt{L_.B, L_.C};
  x.a = arith::mod(x.a, L_.A);
  return x;
}

QuadInt ResidueRing::pow(QuadInt x, i64 e) const {
  QuadInt result = reduce({1, 0}), base = reduce(x);
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

bool ResidueRing::is_unit(QuadInt x) const { return pow(x, phi_) == reduce({1, 0}); }

QuadInt ResidueRing::inverse(QuadInt x) const {
  QuadInt y = pow(x, phi_ - 1);
  if (mul(x, y) != reduce({1, 0})) throw NotCoprimeError("element is not invertible modulo the conductor");
  return y;
}

std::vector<QuadInt> ResidueRing::elements() const {
  std::vector<QuadInt> out;
  for (i64 b = 0; b < L_.C; ++b)
    for (i64 a = 0; a < L_.A; ++a) out.push_back(reduce({a + b * L_.B, b}));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<std::vector<QuadInt>, int> units_mod_F(const Conductor& F) {
  std::vector<QuadInt> out;
  for (QuadInt u : F.field().units())
    if (F.ideal().contains(u - QuadInt{1, 0})) out.push_back(u);
  return {out, static_cast<int>(out.size())};
}

bool in_K1F(QuadInt lam, QuadInt mu, const Conductor& F) {
  if (lam.is_zero() || mu.is_zero()) throw std::invalid_argument("in_K1F needs nonzero elements");
  const Field& K = F.field();
  QIdeal L = QIdeal::principal(K, lam), M = QIdeal::principal(K, mu);
  for (const auto& [P, e] : F.factorization())
    if (valuation(L, P) != valuation(M, P)) throw NotApplicableError("quotient is not prime to the conductor");
  QIdeal FH = F.ideal() * hcf(L, M);
  return FH.contains(lam - mu);
}

bool same_ray_class(const QIdeal& I, const QIdeal& J, const Conductor& F) {
  if (!F.coprime_to(I) || !F.coprime_to(J)) throw NotCoprimeError("ideal not prime to the conductor");
  const Field& K = F.field();
  auto g = (I * J.conj()).generator();
  if (!g) return false;
  // I·J^{-1} = (g/N(J))·O_K; clear denominators into λ/μ.
  Rational n = J.norm();
  QuadInt lam = n.denominator() * g->num;
  QuadInt mu{arith::mul(g->den, n.numerator()), 0};
  for (QuadInt u : K.units())
    if (in_K1F(K.mul(u, lam), mu, F)) return true;
  return false;
}

RayClassGroup::RayClassGroup(const Conductor& F) : F_(F), ring_(F) {
  std::tie(units_F_, w_F_) = units_mod_F(F);
  build_class_reps();
  i64 w = static_cast<i64>(field().units().size());
  order_ = arith::mul(class_number(), ring_.phi()) * w_F_ / w;
}

GroupPtr RayClassGroup::make(const Conductor& F) { return GroupPtr(new RayClassGroup(F)); }

void RayClassGroup::build_class_reps() {
  const Field& K = field();
  i64 h = virtheta::class_number(K);
  QIdeal avoid = QIdeal::integer(K, F_.norm());
  for (i64 B = 16;; B *= 2) {
    reps_.clear();
    for (const auto& I : enumerate_ideals(K, B, avoid)) {
      bool fresh = std::none_of(reps_.begin(), reps_.end(), [&](const QIdeal& R) { return (I * R.conj()).is_principal(); });
      if (fresh) reps_.push_back(I);
      if (static_cast<i64>(reps_.size()) == h) break;
    }
    if (static_cast<i64>(reps_.size()) == h) break;
    if (B > kEnumerationCap) throw BoundError("class group representatives not found");
  }
  for (const auto& R : reps_) rep_norm_inv_.push_back(ring_.reduce({arith::invmod(R.norm_integral(), F_.norm()), 0}));
}

QuadInt RayClassGroup::canonical_residue(QuadInt r) const {
  QuadInt best = ring_.reduce(r);
  for (QuadInt u : field().units()) best = std::min(best, ring_.mul(u, r));
  return best;
}

QuadInt RayClassGroup::element_residue(const KElt& gamma) const {
  const Field& K = field();
  i64 nF = F_.norm();
  if (std::gcd(gamma.den, nF) == 1) {
    QuadInt r = ring_.mul(gamma.num, {arith::invmod(gamma.den, nF), 0});
    if (!ring_.is_unit(r)) throw NotCoprimeError("element not prime to the conductor");
    return r;
  }
  // Rewrite γ = λ/μ with λ, μ integral and prime to F, via an element of conj(G) with
  // exact valuations at the primes of F, G = hcf(x, den).
  QIdeal X = QIdeal::principal(K, gamma.num), E = QIdeal::integer(K, gamma.den);
  std::vector<QIdeal> sub;
  for (const auto& [P, e] : F_.factorization()) {
    if (valuation(X, P) != valuation(E, P)) throw NotCoprimeError("element not prime to the conductor");
  }
  QIdeal G = hcf(X, E), Gc = G.conj();
  for (const auto& [P, e] : F_.factorization()) sub.push_back(Gc * P);
  Lattice2 L = Gc.lattice();
  i64 NG = G.norm_integral();
  for (i64 radius = 1;; ++radius) {
    for (i64 s = -radius; s <= radius; ++s) {
      for (i64 t = -radius; t <= radius; ++t) {
        if (std::max(std::abs(s), std::abs(t)) != radius) continue;
        QuadInt g = s * QuadInt{L.A, 0} + t * QuadInt{L.B, L.C};
        bool exact = std::none_of(sub.begin(), sub.end(), [&](const QIdeal& Q) { return Q.contains(g); });
        if (!exact) continue;
        QuadInt lam = K.mul(gamma.num, g), mu = gamma.den * g;
        lam = {lam.a / NG, lam.b / NG};
        mu = {mu.a / NG, mu.b / NG};
        return ring_.mul(lam, ring_.inverse(mu));
      }
    }
  }
}

ClassSig RayClassGroup::signature(const QIdeal& I) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sig_cache_.find(I);
    if (it != sig_cache_.end()) return it->second;
  }
  const Field& K = field();
  for (int c = 0; c < static_cast<int>(reps_.size()); ++c) {
    auto g = (I * reps_[c].conj()).generator();
    if (!g) continue;
    // I·R_c^{-1} = (g / N(R_c))·O_K.
    QuadInt r;
    if (std::gcd(g->den, F_.norm()) == 1) {
      r = ring_.mul(element_residue(*g), rep_norm_inv_[c]);
    } else {
      r = element_residue(K.make(g->num, arith::mul(g->den, reps_[c].norm_integral())));
    }
    ClassSig s{c, canonical_residue(r)};
    std::lock_guard<std::mutex> lock(mu_);
    sig_cache_.emplace(I, s);
    return s;
  }
  throw std::logic_error("ideal matched no class representative");
}

std::map<ClassSig, QIdeal> RayClassGroup::class_table(i64 avoid, i64 initial_bound) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = tables_.find(avoid);
    if (it != tables_.end()) return it->second;
  }
  i64 B = initial_bound > 0 ? initial_bound : std::max<i64>(30 * F_.norm(), 64);
  for (;; B *= 2) {
    if (B > kEnumerationCap) throw BoundError("ray class enumeration exceeded its cap");
    std::map<ClassSig, QIdeal> table;
    for (const auto& I : enumerate_ideals(field(), B, F_.ideal())) {
      if (std::gcd(I.norm_integral(), avoid) != 1) continue;
      table.try_emplace(signature(I), I);
      if (static_cast<i64>(table.size()) == order_) break;
    }
    if (static_cast<i64>(table.size()) > order_) throw std::logic_error("more ray classes than the group order");
    if (static_cast<i64>(table.size()) == order_) {
      std::lock_guard<std::mutex> lock(mu_);
      tables_.emplace(avoid, table);
      return table;
    }
  }
}

QIdeal RayClassGroup::canonical_key(const ClassSig& s) const { return class_table().at(s); }

QIdeal RayClassRef::canonical_key() const { return group->canonical_key(sig); }

RayClassRef ray_class(const GroupPtr& G, const QIdeal& I) {
  if (!G->conductor().coprime_to(I)) throw NotCoprimeError("ideal " + I.to_string() + " not prime to the conductor");
  return {G, I, G->signature(I)};
}

RayClassRef ray_class(const GroupPtr& G, const KElt& gamma) { return ray_class(G, QIdeal::principal(G->field(), gamma)); }

RayClassRef ray_class(const GroupPtr& G, QuadInt gamma) { return ray_class(G, KElt{gamma, 1}); }

RayClassRef operator*(const RayClassRef& x, const RayClassRef& y) {
  if (!(x.group->conductor() == y.group->conductor())) throw std::invalid_argument("classes with different conductors");
  // Keep representatives small enough for 64-bit lattice arithmetic.
  auto size = [](const QIdeal& I) {
    Rational n = I.scale();
    return i128{I.a()} * std::max<i128>(std::abs(n.numerator()), n.denominator());
  };
  constexpr i128 kLimit = 1'000'000'000;
  if (size(x.rep) * size(y.rep) > kLimit) {
    QIdeal a = size(x.rep) > 100'000 ? x.group->canonical_key(x.sig) : x.rep;
    QIdeal b = size(y.rep) > 100'000 ? y.group->canonical_key(y.sig) : y.rep;
    if (size(a) * size(b) > kLimit) {
      a = x.group->canonical_key(x.sig);
      b = y.group->canonical_key(y.sig);
    }
    QIdeal rep = a * b;
    return {x.group, rep, x.group->signature(rep)};
  }
  QIdeal rep = x.rep * y.rep;
  return {x.group, rep, x.group->signature(rep)};
}

RayClassRef inverse(const RayClassRef& x) { return {x.group, x.rep.inverse(), x.group->signature(x.rep.inverse())}; }

std::vector<RayClassRef> all_classes(const GroupPtr& G) {
  std::vector<RayClassRef> out;
  for (const auto& [s, I] : G->class_table()) out.push_back({G, I, s});
  std::sort(out.begin(), out.end(), [](const RayClassRef& x, const RayClassRef& y) { return x.rep < y.rep; });
  return out;
}

RayClassRef crt_class(const GroupPtr& G, const std::vector<std::pair<QIdeal, QuadInt>>& components) {
  const Field& K = G->field();
  QIdeal prod = QIdeal::unit(K);
  std::vector<ResidueRing> rings;
  for (size_t i = 0; i < components.size(); ++i) {
    const auto& [Q, r] = components[i];
    for (size_t j = 0; j < i; ++j)
      if (!coprime(Q, components[j].first)) throw std::invalid_argument("CRT factors are not coprime");
    prod = prod * Q;
    rings.emplace_back(Conductor(Q));
    if (!rings.back().is_unit(r))
      throw NotCoprimeError("residue " + K.format(r) + " is not invertible modulo " + Q.to_string());
  }
  if (!(prod == G->conductor().ideal())) throw std::invalid_argument("CRT factors do not multiply to the conductor");
  for (QuadInt g : G->ring().elements()) {
    bool ok = true;
    for (size_t i = 0; i < components.size() && ok; ++i) ok = rings[i].congruent(g, components[i].second);
    if (ok) return ray_class(G, g);
  }
  throw std::logic_error("CRT lift not found");
}

RayClassRef reduce_class(const RayClassRef& x, const GroupPtr& target) {
  if (!target->conductor().divides(x.group->conductor()))
    throw std::invalid_argument("target conductor does not divide the class conductor");
  return ray_class(target, x.rep);
}

std::vector<RayClassRef> lift_subgroup(const std::vector<RayClassRef>& B, const GroupPtr& larger) {
  if (B.empty()) return {};
  const GroupPtr& small = B.front().group;
  std::set<ClassSig> sigs;
  for (const auto& b : B) sigs.insert(b.sig);
  std::vector<RayClassRef> out;
  for (const auto& y : all_classes(larger))
    if (sigs.count(reduce_class(y, small).sig)) out.push_back(y);
  return out;
}

int phi_prime(i64 Dprime, i64 n) {
  if (std::gcd(n, 2 * Dprime) != 1) throw NotCoprimeError("norm not prime to 2D'");
  int v = 1;
  for (auto [p, e] : arith::factor(n))
    if (e % 2 == 1) v *= arith::legendre(Dprime, p);
  return v;
}

int psi_value(const CharacterPsi& chi, const QIdeal& I) {
  if (!I.is_integral()) throw std::invalid_argument("psi_value needs an integral ideal");
  return phi_prime(chi.Dprime, I.norm_integral());
}

int psi_class(const CharacterPsi& chi, const RayClassRef& x) {
  auto table = x.group->class_table(2 * std::abs(chi.Dprime));
  return psi_value(chi, table.at(x.sig));
}

QIdeal psi_conductor(i64 D, i64 Dprime) {
  Field K(D), Kp(Dprime);
  i64 dt = std::abs(K.disc()), dtp = std::abs(Kp.disc());
  i64 g = std::gcd(std::abs(D), std::abs(Dprime));
  i64 dpp = std::abs(D) / g * (std::abs(Dprime) / g);
  i64 dtpp = dpp % 4 == 1 ? dpp : 4 * dpp;
  int a = (dt % 2 == 0 && dtp % 2 == 0 && dtpp % 2 == 0) ? 1 : 0;
  return QIdeal::integer(K, (i64{1} << a) * dtp / std::gcd(dt, dtp));
}

bool admissible(const Conductor& F, const Conductor& Fprime, i64 D, i64 Dprime) {
  if (F.field().D() != D || Fprime.field().D() != Dprime) return false;
  if (!F.self_conjugate() || !Fprime.self_conjugate()) return false;
  if (!psi_conductor(D, Dprime).divides(F.ideal())) return false;
  if (!psi_conductor(Dprime, D).divides(Fprime.ideal())) return false;
  return arith::mul(F.norm(), F.field().disc()) == arith::mul(Fprime.norm(), Fprime.field().disc());
}

ASSets compute_A_S(const CharacterPsi& chi, const GroupPtr& G, i64 bound) {
  const Conductor& F = G->conductor();
  const Field& K = G->field();
  if (K.D() != chi.D) throw std::invalid_argument("character and conductor live in different fields");
  if (!F.self_conjugate()) throw std::invalid_argument("A/S need a self-conjugate conductor");
  if (!psi_conductor(chi.D, chi.Dprime).divides(F.ideal()))
    throw std::invalid_argument("conductor is not contained in the character conductor");
  i64 avoid = 2 * std::abs(chi.Dprime);
  i64 B = bound > 0 ? bound : 30 * F.norm();
  auto table = G->class_table(avoid, B);

  // ψ must be constant on every ray class met during enumeration.
  std::map<ClassSig, int> psi;
  for (const auto& [s, R] : table) psi[s] = psi_value(chi, R);
  i64 checked_to = std::min<i64>(B, 4 * F.norm() + 64);
  for (const auto& I : enumerate_ideals(K, checked_to, F.ideal())) {
    if (std::gcd(I.norm_integral(), avoid) != 1) continue;
    if (psi_value(chi, I) != psi.at(G->signature(I)))
      throw std::logic_error("psi is not constant on ray classes for this conductor");
  }

  std::map<ClassSig, RayClassRef> A, S;
  for (const auto& [s, R] : table) {
    QIdeal skew = R * R * QIdeal(K, Rational(1, R.norm_integral()), 1, 0);
    RayClassRef y = ray_class(G, skew);
    (psi.at(s) == 1 ? A : S).emplace(y.sig, y);
  }
  auto closure_error = [](const std::string& what) {
    throw BoundError("A/S closure failed (" + what + "); increase the enumeration bound");
  };
  if (A.size() != S.size() || S.empty()) closure_error("|A| != |S|");
  for (const auto& [s1, a1] : A) {
    for (const auto& [s2, a2] : A)
      if (!A.count((a1 * a2).sig)) closure_error("A·A not in A");
    for (const auto& [s2, x] : S)
      if (!S.count((a1 * x).sig)) closure_error("A·S not in S");
  }
  const RayClassRef& s0 = S.begin()->second;
  std::set<ClassSig> coset;
  for (const auto& [s, a] : A) coset.insert((s0 * a).sig);
  for (const auto& [s, x] : S)
    if (!coset.count(s)) closure_error("S != s0·A");

  ASSets out;
  auto by_key = [](const RayClassRef& x, const RayClassRef& y) { return x.canonical_key() < y.canonical_key(); };
  for (auto& [s, a] : A) out.A.push_back(a);
  for (auto& [s, x] : S) out.S.push_back(x);
  std::sort(out.A.begin(), out.A.end(), by_key);
  std::sort(out.S.begin(), out.S.end(), by_key);
  return out;
}

namespace {

nlohmann::json lattice_json(const Lattice2& L) { return nlohmann::json::array({L.A, L.B, L.C}); }

std::string element_str(QuadInt x) {
  if (x.b == 0) return std::to_string(x.a);
  std::string w = x.b == 1 ? "w" : x.b == -1 ? "-w" : std::to_string(x.b) + "*w";
  if (x.a == 0) return w;
  return std::to_string(x.a) + (x.b > 0 ? "+" : "") + w;
}

nlohmann::json class_json(const RayClassRef& x) {
  QIdeal key = x.canonical_key();
  nlohmann::json j = {{"hnf", lattice_json(key.lattice())}, {"ideal", key.to_string()}};
  if (auto g = key.generator(); g && g->den == 1) j["generator"] = element_str(g->num);
  return j;
}

}  // namespace

nlohmann::json as_sets_to_json(const CharacterPsi& chi, const GroupPtr& G, const ASSets& as) {
  nlohmann::json j = {{"D", chi.D}, {"Dp", chi.Dprime}, {"F", lattice_json(G->conductor().ideal().lattice())}};
  j["A"] = nlohmann::json::array();
  j["S"] = nlohmann::json::array();
  for (const auto& x : as.A) j["A"].push_back(class_json(x));
  for (const auto& x : as.S) j["S"].push_back(class_json(x));
  return j;
}

ASSets as_sets_from_json(const nlohmann::json& j, const CharacterPsi& chi, const GroupPtr& G) {
  if (j.at("D").get<i64>() != chi.D || j.at("Dp").get<i64>() != chi.Dprime ||
      j.at("F") != lattice_json(G->conductor().ideal().lattice()))
    throw std::invalid_argument("A/S document is for a different (D, D', F)");
  auto read = [&](const nlohmann::json& arr) {
    std::vector<RayClassRef> out;
    for (const auto& e : arr) {
      const auto& h = e.at("hnf");
      Lattice2 L{h.at(0).get<i64>(), h.at(1).get<i64>(), h.at(2).get<i64>()};
      out.push_back(ray_class(G, QIdeal::from_lattice(G->field(), L)));
    }
    return out;
  };
  return {read(j.at("A")), read(j.at("S"))};
}

ClassCombo skew_combo(const ASSets& as, const RayClassRef& J) {
  ClassCombo W;
  for (const auto& a : as.A) W.emplace_back(1, a * J);
  for (const auto& s : as.S) W.emplace_back(-1, s * J);
  return W;
}

QSeries ray_theta(const ClassCombo& W, Rational d, Rational trunc) {
  if (d <= Rational(0)) throw std::invalid_argument("scale factor must be positive");
  QSeries out(d.numerator(), trunc);
  if (W.empty()) return out;
  const GroupPtr& G = W.front().second.group;
  std::map<ClassSig, i64> coeff;
  for (const auto& [n, x] : W) {
    if (!(x.group->conductor() == G->conductor())) throw std::invalid_argument("classes with different conductors");
    coeff[x.sig] += n;
  }
  i64 maxN = arith::floor(d * trunc);
  if (maxN < 1) return out;
  for (const auto& I : enumerate_ideals(G->field(), maxN, G->conductor().ideal())) {
    auto it = coeff.find(G->signature(I));
    if (it == coeff.end() || it->second == 0) continue;
    out.add_term(arith::mul(I.norm_integral(), d.denominator()), BigInt(static_cast<long>(it->second)));
  }
  return out;
}

}  // namespace virtheta
