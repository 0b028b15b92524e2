#include "virtheta/quadfield.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace virtheta {

Field::Field(i64 D) : D_(D), half_(arith::mod(D, 4) == 1) {
  if (D >= 0 || !arith::is_squarefree(D)) throw std::invalid_argument("D must be negative and squarefree");
  units_ = {{1, 0}, {-1, 0}};
  if (D == -1) {
    units_.push_back({0, 1});
    units_.push_back({0, -1});
  } else if (D == -3) {
    units_.push_back({0, 1});
    units_.push_back({0, -1});
    units_.push_back({-1, 1});
    units_.push_back({1, -1});
  }
}

QuadInt Field::mul(QuadInt x, QuadInt y) const {
  i64 bd = arith::mul(x.b, y.b);
  return {arith::sub(arith::mul(x.a, y.a), arith::mul(omega_norm(), bd)),
          arith::add(arith::add(arith::mul(x.a, y.b), arith::mul(x.b, y.a)), arith::mul(omega_trace(), bd))};
}

QuadInt Field::conj(QuadInt x) const { return {arith::add(x.a, arith::mul(omega_trace(), x.b)), -x.b}; }

i128 Field::norm128(QuadInt x) const {
  return static_cast<i128>(x.a) * x.a + static_cast<i128>(omega_trace()) * x.a * x.b +
         static_cast<i128>(omega_norm()) * x.b * x.b;
}

i64 Field::norm(QuadInt x) const { return arith::narrow(norm128(x)); }

i64 Field::trace(QuadInt x) const { return arith::add(arith::mul(2, x.a), arith::mul(omega_trace(), x.b)); }

QuadInt Field::sqrtD() const { return half_ ? QuadInt{-1, 2} : QuadInt{0, 1}; }

KElt Field::make(QuadInt num, i64 den) const {
  if (den == 0) throw std::domain_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i64 g = std::gcd(std::gcd(num.a, num.b), den);
  return {{num.a / g, num.b / g}, den / g};
}

KElt Field::mul(const KElt& x, const KElt& y) const { return make(mul(x.num, y.num), arith::mul(x.den, y.den)); }

KElt Field::div(const KElt& x, const KElt& y) const {
  if (y.num.is_zero()) throw std::domain_error("division by zero");
  QuadInt num = y.den * mul(x.num, conj(y.num));
  return make(num, arith::mul(norm(y.num), x.den));
}

Rational Field::norm(const KElt& x) const { return Rational(norm(x.num), arith::mul(x.den, x.den)); }

std::string Field::format(QuadInt x) const {
  if (x.b == 0) return std::to_string(x.a);
  std::string w = x.b == 1 ? "w" : x.b == -1 ? "-w" : std::to_string(x.b) + "*w";
  if (x.a == 0) return w;
  return std::to_string(x.a) + (x.b > 0 ? "+" : "") + w;
}

std::string Field::format(const KElt& x) const {
  if (x.den == 1) return format(x.num);
  return "(" + format(x.num) + ")/" + std::to_string(x.den);
}

bool Lattice2::contains(QuadInt x) const {
  if (x.b % C != 0) return false;
  i64 k = x.b / C;
  return arith::mod(arith::sub(x.a, arith::mul(k, B)), A) == 0;
}

Lattice2 hnf(const std::vector<QuadInt>& vectors) {
  std::vector<QuadInt> v;
  for (auto x : vectors)
    if (!x.is_zero()) v.push_back(x);
  // Euclid on the ω-coordinate until a single vector has a nonzero one.
  while (true) {
    int pivot = -1;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
      if (v[i].b != 0 && (pivot < 0 || std::abs(v[i].b) < std::abs(v[pivot].b))) pivot = i;
    }
    if (pivot < 0) throw std::invalid_argument("lattice has rank < 2");
    bool reduced = true;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
      if (i == pivot || v[i].b == 0) continue;
      v[i] = v[i] - (v[i].b / v[pivot].b) * v[pivot];
      reduced = false;
    }
    if (reduced) {
      QuadInt p = v[pivot].b < 0 ? -v[pivot] : v[pivot];
      i64 A = 0;
      for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (i != pivot) A = std::gcd(A, v[i].a);
      if (A == 0) throw std::invalid_argument("lattice has rank < 2");
      return {A, arith::mod(p.a, A), p.b};
    }
  }
}

QIdeal::QIdeal(Field field, Rational scale, i64 a, i64 b) : field_(field), scale_(scale), a_(a), b_(b) {
  if (scale <= Rational(0) || a <= 0 || b < 0 || b >= a) throw std::invalid_argument("ideal not in canonical HNF");
  if (arith::mod(field_.norm(QuadInt{b, 1}), a) != 0) throw std::invalid_argument("lattice is not closed under ω");
}

QIdeal QIdeal::from_gens(const Field& K, const std::vector<KElt>& gens) {
  i64 L = 1;
  for (const auto& g : gens) L = arith::lcm(L, g.den);
  std::vector<QuadInt> vecs;
  for (const auto& g : gens) {
    QuadInt x = (L / g.den) * g.num;
    vecs.push_back(x);
    vecs.push_back(K.mul(x, K.omega()));
  }
  bool nonzero = std::any_of(vecs.begin(), vecs.end(), [](QuadInt x) { return !x.is_zero(); });
  if (!nonzero) throw std::invalid_argument("all generators are zero");
  Lattice2 h = hnf(vecs);
  return QIdeal(K, Rational(h.C, L), h.A / h.C, h.B / h.C);
}

QIdeal QIdeal::from_gens(const Field& K, const std::vector<QuadInt>& gens) {
  std::vector<KElt> g;
  for (auto x : gens) g.push_back({x, 1});
  return from_gens(K, g);
}

QIdeal QIdeal::from_lattice(const Field& K, const Lattice2& L) {
  if (L.A % L.C != 0 || L.B % L.C != 0) throw std::invalid_argument("lattice is not an ideal");
  return QIdeal(K, Rational(L.C), L.A / L.C, L.B / L.C);
}

i64 QIdeal::norm_integral() const {
  Rational n = norm();
  if (!is_integral()) throw std::domain_error("ideal is not integral");
  return n.numerator();
}

Lattice2 QIdeal::lattice() const {
  if (!is_integral()) throw std::domain_error("ideal is not integral");
  i64 s = scale_.numerator();
  return {arith::mul(s, a_), arith::mul(s, b_), s};
}

bool QIdeal::contains(const KElt& x) const {
  // x/scale = u·a + v·(b+ω) with integers u, v.
  i64 p = scale_.numerator(), q = scale_.denominator();
  i128 den = static_cast<i128>(x.den) * p;
  i128 vnum = static_cast<i128>(q) * x.num.b;
  if (vnum % den != 0) return false;
  i128 v = vnum / den;
  i128 rest = static_cast<i128>(q) * x.num.a - v * b_ * den;
  if (rest % den != 0) return false;
  return (rest / den) % a_ == 0;
}

QIdeal QIdeal::conj() const {
  return QIdeal(field_, scale_, a_, arith::mod(-b_ - field_.omega_trace(), a_));
}

QIdeal QIdeal::inverse() const {
  QIdeal c = conj();
  return QIdeal(field_, Rational(1) / (scale_ * Rational(a_)), c.a_, c.b_);
}

std::optional<KElt> QIdeal::generator() const {
  // Lagrange-Gauss reduction of the basis {a, b+ω} under the norm form.
  const Field& K = field_;
  QuadInt u{a_, 0}, v{b_, 1};
  while (true) {
    if (K.norm128(v) < K.norm128(u)) std::swap(u, v);
    i128 nu = K.norm128(u);
    i128 t = K.norm128(u + v) - nu - K.norm128(v);
    i128 num = t + nu, den = 2 * nu;
    i128 m = num / den;
    if (num % den != 0 && num < 0) --m;
    if (m == 0) break;
    v = v - arith::narrow(m) * u;
  }
  if (K.norm128(u) != a_) return std::nullopt;
  return K.make(scale_.numerator() * u, scale_.denominator());
}

bool QIdeal::divides(const QIdeal& J) const {
  KElt s{QuadInt{J.scale_.numerator(), 0}, J.scale_.denominator()};
  const Field& K = field_;
  return contains(K.mul(s, KElt{{J.a_, 0}, 1})) && contains(K.mul(s, KElt{{J.b_, 1}, 1}));
}

std::string QIdeal::to_string() const {
  std::string body = "(" + std::to_string(a_) + "," + field_.format(QuadInt{b_, 1}) + ")";
  if (a_ == 1) body = "(1)";
  if (scale_ == Rational(1)) return body;
  return arith::to_string(scale_) + "*" + body;
}

QIdeal operator*(const QIdeal& I, const QIdeal& J) {
  const Field& K = I.field_;
  if (!(K == J.field_)) throw std::invalid_argument("ideals from different fields");
  QuadInt x{I.b_, 1}, y{J.b_, 1};
  std::vector<QuadInt> vecs = {{arith::mul(I.a_, J.a_), 0}, I.a_ * y, J.a_ * x, K.mul(x, y)};
  Lattice2 h = hnf(vecs);
  return QIdeal(K, I.scale_ * J.scale_ * Rational(h.C), h.A / h.C, h.B / h.C);
}

bool operator<(const QIdeal& I, const QIdeal& J) {
  auto key = [](const QIdeal& X) {
    return std::make_tuple(X.field_.D(), X.norm(), X.scale_ * Rational(X.a_), X.scale_ * Rational(X.b_), X.scale_);
  };
  return key(I) < key(J);
}

QIdeal hcf(const QIdeal& I, const QIdeal& J) {
  const Field& K = I.field();
  i64 L = arith::lcm(I.scale().denominator(), J.scale().denominator());
  i64 k1 = arith::mul(I.scale().numerator(), L / I.scale().denominator());
  i64 k2 = arith::mul(J.scale().numerator(), L / J.scale().denominator());
  std::vector<QuadInt> vecs = {k1 * QuadInt{I.a(), 0}, k1 * QuadInt{I.b(), 1}, k2 * QuadInt{J.a(), 0},
                               k2 * QuadInt{J.b(), 1}};
  Lattice2 h = hnf(vecs);
  return QIdeal(K, Rational(h.C, L), h.A / h.C, h.B / h.C);
}

QIdeal lcm(const QIdeal& I, const QIdeal& J) { return hcf(I.inverse(), J.inverse()).inverse(); }

QIdeal power(const QIdeal& I, int e) {
  QIdeal base = e < 0 ? I.inverse() : I;
  QIdeal out = QIdeal::unit(I.field());
  for (int i = 0; i < std::abs(e); ++i) out = out * base;
  return out;
}

bool coprime(const QIdeal& I, const QIdeal& J) { return hcf(I, J).is_unit_ideal(); }

Splitting split_prime(const Field& K, i64 p) {
  if (!arith::is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  i64 t = K.omega_trace(), n = K.omega_norm();
  auto ideal_for_root = [&](i64 r) { return QIdeal(K, Rational(1), p, arith::mod(-r, p)); };
  std::vector<i64> roots;
  Splitting::Kind kind;
  if (p == 2) {
    if (!K.half_integral()) {
      kind = Splitting::Kind::ramified;
    } else {
      kind = arith::mod(K.D(), 8) == 1 ? Splitting::Kind::split : Splitting::Kind::inert;
    }
    for (i64 r = 0; r < 2; ++r)
      if (arith::mod(r * r - t * r + n, 2) == 0) roots.push_back(r);
  } else {
    int l = arith::legendre(K.D(), p);
    kind = l == 0 ? Splitting::Kind::ramified : l == 1 ? Splitting::Kind::split : Splitting::Kind::inert;
    if (kind != Splitting::Kind::inert) {
      i64 delta = t * t - 4 * n;
      i64 s = arith::sqrt_mod(delta, p);
      i64 inv2 = arith::invmod(2, p);
      roots.push_back(arith::mod(static_cast<i64>(static_cast<i128>(t + s) * inv2 % p), p));
      roots.push_back(arith::mod(static_cast<i64>(static_cast<i128>(t - s + p) * inv2 % p), p));
    }
  }
  Splitting out{kind, p, {}};
  if (kind == Splitting::Kind::inert) {
    out.primes.push_back(QIdeal(K, Rational(p), 1, 0));
    return out;
  }
  std::vector<QIdeal> ps;
  for (i64 r : roots) ps.push_back(ideal_for_root(r));
  std::sort(ps.begin(), ps.end(), [](const QIdeal& x, const QIdeal& y) { return x.b() < y.b(); });
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  if ((kind == Splitting::Kind::split) != (ps.size() == 2))
    throw std::logic_error("splitting type disagrees with root count at p=" + std::to_string(p));
  out.primes = ps;
  return out;
}

namespace {

i64 rational_prime_below(const QIdeal& P) { return P.a() == 1 ? P.scale().numerator() : P.a(); }

int p_adic(i64 n, i64 p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace

int valuation(const QIdeal& I, const QIdeal& P) {
  i64 p = rational_prime_below(P);
  int e = (P.a() == p && P.conj() == P) ? 2 : 1;
  int v = e * (p_adic(I.scale().numerator(), p) - p_adic(I.scale().denominator(), p));
  QIdeal J(I.field(), Rational(1), I.a(), I.b());
  while (J.a() % p == 0 && P.divides(J)) {
    J = J / P;
    ++v;
  }
  return v;
}

std::map<QIdeal, int> factor_ideal(const QIdeal& I) {
  std::vector<i64> primes;
  for (i64 n : {I.scale().numerator(), I.scale().denominator(), I.a()})
    for (auto [p, e] : arith::factor(n)) primes.push_back(p);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::map<QIdeal, int> out;
  for (i64 p : primes) {
    for (const auto& P : split_prime(I.field(), p).primes) {
      int v = valuation(I, P);
      if (v != 0) out.emplace(P, v);
    }
  }
  return out;
}

QIdeal from_factorization(const Field& K, const std::map<QIdeal, int>& f) {
  QIdeal out = QIdeal::unit(K);
  for (const auto& [P, e] : f) out = out * power(P, e);
  return out;
}

std::vector<QIdeal> enumerate_ideals(const Field& K, i64 B, const std::optional<QIdeal>& coprime_to) {
  if (B < 1) throw std::invalid_argument("enumeration bound must be positive");
  std::vector<std::pair<QIdeal, i64>> prime_ideals;
  for (i64 p : arith::primes_up_to(B)) {
    for (const auto& P : split_prime(K, p).primes) {
      i64 n = P.norm_integral();
      if (n > B) continue;
      if (coprime_to && P.divides(*coprime_to)) continue;
      prime_ideals.emplace_back(P, n);
    }
  }
  std::sort(prime_ideals.begin(), prime_ideals.end(),
            [](const auto& x, const auto& y) { return x.second < y.second || (x.second == y.second && x.first < y.first); });
  std::vector<QIdeal> out;
  std::function<void(size_t, const QIdeal&, i64)> dfs = [&](size_t start, const QIdeal& cur, i64 norm) {
    out.push_back(cur);
    for (size_t i = start; i < prime_ideals.size(); ++i) {
      const auto& [P, n] = prime_ideals[i];
      if (norm > B / n) break;
      QIdeal next = cur * P;
      i64 next_norm = norm * n;
      // Take P^e for e >= 1, then continue with primes after P.
      while (true) {
        dfs(i + 1, next, next_norm);
        if (next_norm > B / n) break;
        next = next * P;
        next_norm *= n;
      }
    }
  };
  dfs(0, QIdeal::unit(K), 1);
  std::sort(out.begin(), out.end());
  return out;
}

i64 class_number(const Field& K) {
  i64 delta = K.disc();
  i64 count = 0;
  for (i64 a = 1; 3 * a * a <= -delta; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      i64 num = b * b - delta;
      if (num % (4 * a) != 0) continue;
      i64 c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      ++count;
    }
  }
  return count;
}

}  // namespace virtheta
