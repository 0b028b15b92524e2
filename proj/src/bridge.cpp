#include "virtheta/bridge.hpp"

#include <algorithm>
#include <set>

namespace virtheta {

namespace {

// n = square · squarefree; returns (root of the square, squarefree part).
std::pair<i64, i64> split_square(i64 n) {
  i64 root = 1, free = 1;
  for (auto [p, e] : arith::factor(n)) {
    for (int i = 0; i < e / 2; ++i) root = arith::mul(root, p);
    if (e % 2) free = arith::mul(free, p);
  }
  return {root, free};
}

i64 ceil_div(i64 a, i64 b) { return -arith::floor_div(-a, b); }

std::string ideal_str(const QIdeal& I) { return I.to_string(); }

}  // namespace

bool CosetSpec::is_ideal() const {
  QuadInt v1{lattice.A, 0}, v2{lattice.B, lattice.C};
  return lattice.contains(field.mul(field.omega(), v1)) && lattice.contains(field.mul(field.omega(), v2));
}

ProductReduction product_reduction(i64 r, i64 k, i64 s, i64 ell) {
  if (k < 1 || ell < 1) throw std::invalid_argument("theta levels must be positive");
  ProductReduction out{};
  out.h = std::gcd(k, ell);
  auto [mu, k0] = split_square(k / out.h);
  auto [lambda, ell0] = split_square(ell / out.h);
  out.mu = mu;
  out.k0 = k0;
  out.lambda = lambda;
  out.ell0 = ell0;
  Field K(-arith::mul(k0, ell0));
  QuadInt sq = K.sqrtD();
  i64 g = arith::mul(arith::mul(2 * out.h, lambda), arith::mul(ell0, mu));
  QuadInt v1{arith::mul(g, arith::mul(mu, k0)), 0};
  QuadInt v2 = arith::mul(g, lambda) * sq;
  QuadInt alpha = QuadInt{arith::mul(arith::mul(r, lambda), ell0), 0} + arith::mul(s, mu) * sq;
  Rational d(arith::mul(arith::mul(4 * k, ell), ell0), out.h);
  out.coset = CosetSpec{K, alpha, hnf({v1, v2}), d};
  return out;
}

CosetSpec product_to_coset(i64 r, i64 k, i64 s, i64 ell) { return product_reduction(r, k, s, ell).coset; }

QSeries coset_theta_direct(const CosetSpec& spec, Rational trunc) {
  if (spec.d <= Rational(0)) throw std::invalid_argument("scale factor must be positive");
  QSeries out(spec.d.numerator(), trunc);
  if (trunc < Rational(0)) return out;
  const Field& K = spec.field;
  const Lattice2& L = spec.lattice;
  i64 M = arith::floor(spec.d * trunc);
  i64 disc = std::abs(K.disc()), tr = K.omega_trace();
  i128 fourM = i128{4} * M;
  i64 X = arith::isqrt(fourM / disc);
  std::map<i64, i64> counts;
  for (i64 t = ceil_div(-X - spec.alpha.b, L.C); t <= arith::floor_div(X - spec.alpha.b, L.C); ++t) {
    i64 x1 = spec.alpha.b + t * L.C;
    i128 rest = fourM - i128{disc} * x1 * x1;
    if (rest < 0) continue;
    i64 R = arith::isqrt(rest);
    i64 lo = ceil_div(-R - tr * x1, 2), hi = arith::floor_div(R - tr * x1, 2);
    i64 base = arith::mod(spec.alpha.a + t * L.B, L.A);
    i64 x0 = lo + arith::mod(base - lo, L.A);
    for (; x0 <= hi; x0 += L.A) {
      i128 n = K.norm128({x0, x1});
      if (n <= M) ++counts[arith::narrow(n)];
    }
  }
  for (auto [n, c] : counts) out.add_term(arith::mul(n, spec.d.denominator()), BigInt(static_cast<long>(c)));
  return out;
}

RayThetaSpec coset_to_rayclass(const CosetSpec& spec) {
  if (!spec.is_ideal()) throw std::invalid_argument("coset lattice is not an ideal; decompose it first");
  const Field& K = spec.field;
  QIdeal J = spec.ideal();
  if (J.contains(spec.alpha)) throw std::invalid_argument("alpha lies in J");
  QIdeal A = QIdeal::principal(K, spec.alpha);
  QIdeal H = hcf(A, J);
  GroupPtr G = RayClassGroup::make(J / H);
  RayClassRef cls = ray_class(G, A / H);
  return RayThetaSpec{cls, spec.d / H.norm(), G->w_F(), H};
}

QSeries ray_theta(const RayThetaSpec& spec, Rational trunc) {
  return ray_theta(ClassCombo{{spec.weight, spec.cls}}, spec.scale, trunc);
}

std::vector<CosetSpec> decompose_coset(const CosetSpec& whole, const Lattice2& Lsub) {
  const Lattice2& L = whole.lattice;
  if (!L.contains({Lsub.A, 0}) || !L.contains({Lsub.B, Lsub.C}))
    throw std::invalid_argument("sublattice is not contained in the lattice");
  std::vector<CosetSpec> out;
  std::set<QuadInt> seen;
  auto reduce = [&](QuadInt x) {
    i64 k = arith::floor_div(x.b, Lsub.C);
    x = x - k * QuadInt{Lsub.B, Lsub.C};
    x.a = arith::mod(x.a, Lsub.A);
    return x;
  };
  for (i64 t = 0; t < Lsub.C / L.C; ++t) {
    for (i64 s = 0; s < Lsub.A / L.A; ++s) {
      QuadInt w = s * QuadInt{L.A, 0} + t * QuadInt{L.B, L.C};
      if (!seen.insert(reduce(w)).second) continue;
      out.push_back(CosetSpec{whole.field, whole.alpha + w, Lsub, whole.d});
    }
  }
  if (static_cast<i64>(out.size()) * L.index() != Lsub.index()) throw std::logic_error("transversal has the wrong size");
  return out;
}

QSeries line_theta(const LineCoset& x, Rational trunc) {
  if (x.step <= 0 || x.d <= Rational(0)) throw std::invalid_argument("line coset needs positive step and scale");
  QSeries out(x.d.numerator(), trunc);
  if (trunc < Rational(0)) return out;
  i64 R = arith::isqrt(arith::floor(x.d * trunc));
  for (i64 y = -R + arith::mod(x.v + R, x.step); y <= R; y += x.step)
    out.add_term(arith::mul(arith::mul(y, y), x.d.denominator()), 1);
  return out;
}

std::vector<LineCoset> decompose_line(const LineCoset& whole, i64 sub_step, i64 b) {
  if (sub_step <= 0 || sub_step % whole.step != 0) throw std::invalid_argument("sub-lattice step must be a multiple");
  i64 c = sub_step / whole.step;
  if (std::gcd(b, c) != 1) throw std::invalid_argument("b must be prime to the index");
  std::vector<LineCoset> out;
  for (i64 j = 0; j < c; ++j) out.push_back({whole.v + j * b * whole.step, sub_step, whole.d});
  return out;
}

Thm43Sides thm43_sides(const Thm43Input& in) {
  Conductor F(in.F), Fp(in.Fprime);
  i64 D = F.field().D(), Dp = Fp.field().D();
  if (!admissible(F, Fp, D, Dp)) throw std::invalid_argument("conductor pair is not admissible");
  GroupPtr G = RayClassGroup::make(F), Gp = RayClassGroup::make(Fp);
  ASSets as = in.as ? *in.as : compute_A_S({D, Dp}, G);
  ASSets asp = in.as_prime ? *in.as_prime : compute_A_S({Dp, D}, Gp);
  QSeries lhs = ray_theta(skew_combo(as, ray_class(G, in.J)), in.d, in.trunc);
  QSeries rhs = ray_theta(skew_combo(asp, ray_class(Gp, in.Jprime)), in.d, in.trunc);
  return {lhs, rhs};
}

VerificationReport check_thm43(const Thm43Input& in, const std::string& name) {
  Stopwatch clock;
  auto sides = thm43_sides(in);
  nlohmann::json params = {{"D", in.F.field().D()},         {"Dp", in.Fprime.field().D()},
                           {"F", ideal_str(in.F)},          {"Fp", ideal_str(in.Fprime)},
                           {"J", ideal_str(in.J)},          {"Jp", ideal_str(in.Jprime)},
                           {"d", arith::to_string(in.d)}};
  return make_report(name, params, sides.lhs, sides.rhs, in.trunc, clock);
}

void check_thm44_hypotheses(const Thm44Input& in) {
  std::vector<std::string> errors;
  Conductor F(in.F);
  if (!F.self_conjugate()) errors.push_back("F is not self-conjugate");
  auto fp = factor_ideal(in.P);
  bool prime = in.P.is_integral() && fp.size() == 1 && fp.begin()->second == 1;
  if (!prime) errors.push_back("P is not a prime ideal");
  if (prime && !coprime(in.P, in.F)) errors.push_back("P is not prime to F");
  if (!in.J.is_integral()) errors.push_back("J is not integral");
  else if (!coprime(in.J, in.P * in.F)) errors.push_back("J is not prime to PF");
  if (in.B.empty()) errors.push_back("B is empty");
  if (!errors.empty() || in.B.empty()) {
    std::string msg = "conductor descent hypotheses violated:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw std::invalid_argument(msg);
  }
  GroupPtr G = in.B.front().group;
  if (!(G->conductor().ideal() == in.F)) errors.push_back("B does not live in C_F");
  std::set<ClassSig> B, T;
  for (const auto& b : in.B) B.insert(b.sig);
  for (const auto& t : in.T) T.insert(t.sig);
  RayClassRef one = ray_class(G, QIdeal::unit(G->field()));
  if (!B.count(one.sig)) errors.push_back("B does not contain the identity");
  bool closed = true;
  for (const auto& x : in.B)
    for (const auto& y : in.B) closed = closed && B.count((x * y).sig);
  if (!closed) errors.push_back("B is not closed under multiplication");
  RayClassRef pp = ray_class(G, in.P / in.P.conj());
  if (!B.count((pp * pp).sig)) errors.push_back("[P/conj(P)]^2 is not in B");
  if (!B.count(ray_class(G, in.J / in.J.conj()).sig)) errors.push_back("[J/conj(J)] is not in B");
  std::set<ClassSig> coset;
  for (const auto& x : in.B) coset.insert((x * pp).sig);
  if (coset != T) errors.push_back("T is not B[P/conj(P)]");
  if (!errors.empty()) {
    std::string msg = "conductor descent hypotheses violated:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw std::invalid_argument(msg);
  }
}

Thm43Sides thm44_sides(const Thm44Input& in) {
  check_thm44_hypotheses(in);
  GroupPtr G = in.B.front().group;
  GroupPtr GP = RayClassGroup::make(in.F * in.P);
  auto Bt = lift_subgroup(in.B, GP), Tt = lift_subgroup(in.T, GP);
  RayClassRef J = ray_class(G, in.J), JP = ray_class(GP, in.J);
  ClassCombo big, small;
  for (const auto& x : Bt) big.emplace_back(1, x * JP);
  for (const auto& x : Tt) big.emplace_back(-1, x * JP);
  for (const auto& x : in.B) small.emplace_back(1, x * J);
  for (const auto& x : in.T) small.emplace_back(-1, x * J);
  return {ray_theta(big, in.d, in.trunc), ray_theta(small, in.d, in.trunc)};
}

VerificationReport check_thm44(const Thm44Input& in, const std::string& name) {
  Stopwatch clock;
  auto sides = thm44_sides(in);
  nlohmann::json params = {{"D", in.F.field().D()},
                           {"F", ideal_str(in.F)},
                           {"P", ideal_str(in.P)},
                           {"J", ideal_str(in.J)},
                           {"d", arith::to_string(in.d)}};
  return make_report(name, params, sides.lhs, sides.rhs, in.trunc, clock);
}

}  // namespace virtheta
