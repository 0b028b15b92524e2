#pragma once

#include "virtheta/arith.hpp"

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace virtheta {

// a + b·ω in the ring of integers.
struct QuadInt {
  i64 a = 0;
  i64 b = 0;

  friend auto operator<=>(const QuadInt&, const QuadInt&) = default;
  friend QuadInt operator+(QuadInt x, QuadInt y) { return {arith::add(x.a, y.a), arith::add(x.b, y.b)}; }
  friend QuadInt operator-(QuadInt x, QuadInt y) { return {arith::sub(x.a, y.a), arith::sub(x.b, y.b)}; }
  friend QuadInt operator-(QuadInt x) { return {-x.a, -x.b}; }
  friend QuadInt operator*(i64 s, QuadInt x) { return {arith::mul(s, x.a), arith::mul(s, x.b)}; }
  bool is_zero() const { return a == 0 && b == 0; }
};

// Field element num/den with den > 0 and gcd(num.a, num.b, den) = 1.
struct KElt {
  QuadInt num;
  i64 den = 1;

  friend auto operator<=>(const KElt&, const KElt&) = default;
  bool is_integral() const { return den == 1; }
};

// K = Q[sqrt(D)], D < 0 squarefree; ω = sqrt(D) or (1+sqrt(D))/2.
class Field {
 public:
  explicit Field(i64 D);

  i64 D() const { return D_; }
  i64 disc() const { return half_ ? D_ : 4 * D_; }
  bool half_integral() const { return half_; }
  // ω² = trace·ω − norm.
  i64 omega_trace() const { return half_ ? 1 : 0; }
  i64 omega_norm() const { return half_ ? (1 - D_) / 4 : -D_; }

  QuadInt mul(QuadInt x, QuadInt y) const;
  QuadInt conj(QuadInt x) const;
  i64 norm(QuadInt x) const;
  i128 norm128(QuadInt x) const;
  i64 trace(QuadInt x) const;
  QuadInt sqrtD() const;
  QuadInt omega() const { return {0, 1}; }
  const std::vector<QuadInt>& units() const { return units_; }

  KElt make(QuadInt num, i64 den = 1) const;
  KElt mul(const KElt& x, const KElt& y) const;
  KElt div(const KElt& x, const KElt& y) const;
  Rational norm(const KElt& x) const;

  std::string format(QuadInt x) const;
  std::string format(const KElt& x) const;

  friend bool operator==(const Field& x, const Field& y) { return x.D_ == y.D_; }

 private:
  i64 D_;
  bool half_;
  std::vector<QuadInt> units_;
};

// Z-lattice A·Z + (B + C·ω)·Z with A, C > 0 and 0 <= B < A.
struct Lattice2 {
  i64 A = 1, B = 0, C = 1;
  friend auto operator<=>(const Lattice2&, const Lattice2&) = default;
  i64 index() const { return arith::mul(A, C); }
  bool contains(QuadInt x) const;
};

// Hermite normal form of the lattice spanned by the given integer vectors; throws if rank < 2.
Lattice2 hnf(const std::vector<QuadInt>& vectors);

// Fractional ideal scale·(aZ + (b+ω)Z). The content of the integral part is folded into the
// scale, so the HNF triple (a, b, c) always has c = 1 and the representation is unique.
class QIdeal {
 public:
  QIdeal(Field field, Rational scale, i64 a, i64 b);

  static QIdeal unit(const Field& K) { return QIdeal(K, Rational(1), 1, 0); }
  static QIdeal from_gens(const Field& K, const std::vector<KElt>& gens);
  static QIdeal from_gens(const Field& K, const std::vector<QuadInt>& gens);
  static QIdeal principal(const Field& K, QuadInt x) { return from_gens(K, std::vector<QuadInt>{x}); }
  static QIdeal principal(const Field& K, const KElt& x) { return from_gens(K, std::vector<KElt>{x}); }
  static QIdeal integer(const Field& K, i64 n) { return principal(K, QuadInt{n, 0}); }
  // Integral lattice that happens to be O_K-stable; throws otherwise.
  static QIdeal from_lattice(const Field& K, const Lattice2& L);

  const Field& field() const { return field_; }
  const Rational& scale() const { return scale_; }
  i64 a() const { return a_; }
  i64 b() const { return b_; }

  Rational norm() const { return scale_ * scale_ * Rational(a_); }
  i64 norm_integral() const;
  bool is_integral() const { return scale_.denominator() == 1; }
  bool is_unit_ideal() const { return scale_ == Rational(1) && a_ == 1; }
  // Full HNF of an integral ideal in (1, ω) coordinates.
  Lattice2 lattice() const;

  bool contains(const KElt& x) const;
  bool contains(QuadInt x) const { return contains(KElt{x, 1}); }

  QIdeal conj() const;
  QIdeal inverse() const;
  std::optional<KElt> generator() const;
  bool is_principal() const { return generator().has_value(); }
  // this | J, i.e. J ⊆ this.
  bool divides(const QIdeal& J) const;
  std::string to_string() const;

  friend QIdeal operator*(const QIdeal& I, const QIdeal& J);
  friend QIdeal operator/(const QIdeal& I, const QIdeal& J) { return I * J.inverse(); }
  friend bool operator==(const QIdeal& I, const QIdeal& J) {
    return I.field_ == J.field_ && I.scale_ == J.scale_ && I.a_ == J.a_ && I.b_ == J.b_;
  }
  // Orders by (D, norm, full HNF).
  friend bool operator<(const QIdeal& I, const QIdeal& J);

 private:
  Field field_;
  Rational scale_;
  i64 a_, b_;
};

QIdeal hcf(const QIdeal& I, const QIdeal& J);
QIdeal lcm(const QIdeal& I, const QIdeal& J);
QIdeal power(const QIdeal& I, int e);
bool coprime(const QIdeal& I, const QIdeal& J);

struct Splitting {
  enum class Kind { inert, ramified, split };
  Kind kind;
  i64 p;
  // The prime ideals above p (P, then conj(P) when split).
  std::vector<QIdeal> primes;
};

Splitting split_prime(const Field& K, i64 p);
std::map<QIdeal, int> factor_ideal(const QIdeal& I);
QIdeal from_factorization(const Field& K, const std::map<QIdeal, int>& f);
// Valuation of I at the prime P.
int valuation(const QIdeal& I, const QIdeal& P);

// Integral ideals of norm <= B, optionally coprime to a given integral ideal, in (norm, HNF) order.
std::vector<QIdeal> enumerate_ideals(const Field& K, i64 B, const std::optional<QIdeal>& coprime_to = std::nullopt);

i64 class_number(const Field& K);

}  // namespace virtheta
