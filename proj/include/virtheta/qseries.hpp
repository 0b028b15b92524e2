#pragma once

#include "virtheta/arith.hpp"

#include <gmpxx.h>
#include <json.hpp>

#include <map>
#include <optional>

namespace virtheta {

using BigInt = mpz_class;

struct ThetaSpec {
  i64 ell = 0;
  i64 level = 1;
};

// Truncated q-series with exact rational exponents n/denom and integer coefficients.
// A term is kept iff its exponent is <= trunc.
class QSeries {
 public:
  QSeries() = default;
  QSeries(i64 denom, Rational trunc);

  static QSeries constant(const BigInt& c, Rational trunc);
  static QSeries monomial(Rational exponent, const BigInt& c, Rational trunc);

  i64 denom() const { return denom_; }
  const Rational& trunc() const { return trunc_; }
  const std::map<i64, BigInt>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  BigInt coeff(Rational exponent) const;
  std::optional<Rational> leading_exponent() const;

  // Adds c·q^{n/denom}; silently ignores exponents above the truncation.
  void add_term(i64 n, const BigInt& c);

  QSeries rescaled(i64 new_denom) const;
  QSeries truncated(Rational t) const;
  // Rewrites over the smallest denominator that represents every exponent.
  QSeries normalized() const;

  QSeries& operator+=(const QSeries& other);
  QSeries& operator-=(const QSeries& other);
  QSeries& operator*=(const BigInt& scalar);

  friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
  friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
  friend QSeries operator-(QSeries a) { return a *= BigInt(-1); }
  friend QSeries operator*(QSeries a, const BigInt& s) { return a *= s; }
  friend QSeries operator*(const QSeries& a, const QSeries& b);

 private:
  i64 max_numerator() const;

  i64 denom_ = 1;
  Rational trunc_{0};
  std::map<i64, BigInt> terms_;
};

struct Mismatch {
  Rational exponent;
  BigInt lhs;
  BigInt rhs;
};

struct Comparison {
  bool equal = true;
  std::optional<Mismatch> first_mismatch;
};

QSeries theta_gen(const ThetaSpec& spec, Rational trunc);
QSeries eta(Rational trunc);
QSeries v_func(i64 r, i64 m, Rational trunc);
QSeries virasoro_char(i64 r, i64 s, i64 m, Rational trunc);
QSeries divide_by_unit(const QSeries& num, const QSeries& den);

// Throws std::invalid_argument when T exceeds either truncation.
Comparison equals_to_order(const QSeries& a, const QSeries& b, Rational T);

nlohmann::json to_json(const QSeries& s);
QSeries series_from_json(const nlohmann::json& j);
nlohmann::json bigint_to_json(const BigInt& c);

}  // namespace virtheta
