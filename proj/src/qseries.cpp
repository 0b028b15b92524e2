#include "virtheta/qseries.hpp"

#include <algorithm>

namespace virtheta {

namespace {

// Lower bound on the exponents a series can carry, clamped at 0.
Rational low_exponent(const QSeries& s) {
  Rational low = s.is_zero() ? s.trunc() : *s.leading_exponent();
  return std::min(low, Rational(0));
}

}  // namespace

QSeries::QSeries(i64 denom, Rational trunc) : denom_(denom), trunc_(trunc) {
  if (denom <= 0) throw std::invalid_argument("QSeries denominator must be positive");
}

QSeries QSeries::constant(const BigInt& c, Rational trunc) {
  QSeries s(1, trunc);
  s.add_term(0, c);
  return s;
}

QSeries QSeries::monomial(Rational exponent, const BigInt& c, Rational trunc) {
  QSeries s(exponent.denominator(), trunc);
  s.add_term(exponent.numerator(), c);
  return s;
}

i64 QSeries::max_numerator() const {
  return arith::narrow(arith::floor_div(arith::mul(trunc_.numerator(), denom_), trunc_.denominator()));
}

BigInt QSeries::coeff(Rational exponent) const {
  Rational scaled = exponent * Rational(denom_);
  if (scaled.denominator() != 1) return 0;
  auto it = terms_.find(scaled.numerator());
  return it == terms_.end() ? BigInt(0) : it->second;
}

std::optional<Rational> QSeries::leading_exponent() const {
  if (terms_.empty()) return std::nullopt;
  return Rational(terms_.begin()->first, denom_);
}

void QSeries::add_term(i64 n, const BigInt& c) {
  if (c == 0) return;
  if (Rational(n, denom_) > trunc_) return;
  auto [it, inserted] = terms_.try_emplace(n, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

QSeries QSeries::rescaled(i64 new_denom) const {
  if (new_denom == denom_) return *this;
  if (new_denom % denom_ != 0) throw std::invalid_argument("rescale target is not a multiple of the denominator");
  i64 f = new_denom / denom_;
  QSeries out(new_denom, trunc_);
  for (const auto& [n, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), arith::mul(n, f), c);
  return out;
}

QSeries QSeries::truncated(Rational t) const {
  QSeries out(denom_, std::min(t, trunc_));
  i64 maxn = out.max_numerator();
  for (const auto& [n, c] : terms_) {
    if (n > maxn) break;
    out.terms_.emplace_hint(out.terms_.end(), n, c);
  }
  return out;
}

QSeries QSeries::normalized() const {
  i64 g = denom_;
  for (const auto& [n, c] : terms_) g = std::gcd(g, n);
  QSeries out(denom_ / g, trunc_);
  for (const auto& [n, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), n / g, c);
  return out;
}

QSeries& QSeries::operator+=(const QSeries& other) {
  i64 d = arith::lcm(denom_, other.denom_);
  QSeries a = rescaled(d).truncated(std::min(trunc_, other.trunc_));
  QSeries b = other.rescaled(d);
  for (const auto& [n, c] : b.terms_) a.add_term(n, c);
  return *this = std::move(a);
}

QSeries& QSeries::operator-=(const QSeries& other) { return *this += -other; }

QSeries& QSeries::operator*=(const BigInt& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [n, c] : terms_) c *= scalar;
  return *this;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
  i64 d = arith::lcm(a.denom_, b.denom_);
  Rational t = std::min(a.trunc_ + low_exponent(b), b.trunc_ + low_exponent(a));
  QSeries out(d, t);
  QSeries ra = a.rescaled(d), rb = b.rescaled(d);
  i64 maxn = out.max_numerator();
  std::map<i64, BigInt> acc;
  for (const auto& [n1, c1] : ra.terms_) {
    for (const auto& [n2, c2] : rb.terms_) {
      i64 n = arith::add(n1, n2);
      if (n > maxn) break;
      acc[n] += c1 * c2;
    }
  }
  for (auto& [n, c] : acc) {
    if (c != 0) out.terms_.emplace_hint(out.terms_.end(), n, std::move(c));
  }
  return out;
}

QSeries theta_gen(const ThetaSpec& spec, Rational trunc) {
  i64 k = spec.level;
  if (k <= 0) throw std::invalid_argument("theta level must be positive");
  if (trunc < Rational(0)) throw std::invalid_argument("truncation must be non-negative");
  i64 four_k = arith::mul(4, k), two_k = 2 * k;
  QSeries out(four_k, trunc);
  // Terms (2kn+l)^2/(4k) <= T, i.e. |2kn+l| <= isqrt(floor(4kT)).
  i128 bound = static_cast<i128>(four_k) * trunc.numerator() / trunc.denominator();
  i64 R = arith::isqrt(bound);
  i64 x = -R + arith::mod(arith::add(spec.ell, R), two_k);
  for (; x <= R; x += two_k) out.add_term(arith::mul(x, x), 1);
  return out;
}

QSeries eta(Rational trunc) { return theta_gen({1, 6}, trunc) - theta_gen({5, 6}, trunc); }

QSeries v_func(i64 r, i64 m, Rational trunc) {
  if (m < 2) throw std::invalid_argument("V(r,m) requires m >= 2");
  i64 k = arith::mul(m, m + 1);
  // Only r mod 2k matters; reducing first keeps r(2m+1) in range.
  i64 rr = arith::mod(r, 2 * k);
  return theta_gen({rr, k}, trunc) - theta_gen({arith::mod(arith::mul(rr, 2 * m + 1), 2 * k), k}, trunc);
}

QSeries virasoro_char(i64 r, i64 s, i64 m, Rational trunc) {
  if (m < 2 || s < 1 || s > r || r > m - 1)
    throw std::invalid_argument("Virasoro character indices need 2 <= m and 1 <= s <= r <= m-1");
  i64 k = m * (m + 1);
  QSeries num = theta_gen({r * (m + 1) - s * m, k}, trunc) - theta_gen({r * (m + 1) + s * m, k}, trunc);
  return divide_by_unit(num, eta(trunc));
}

QSeries divide_by_unit(const QSeries& num, const QSeries& den) {
  if (den.is_zero()) throw std::domain_error("division by the zero series");
  i64 d = arith::lcm(num.denom(), den.denom());
  QSeries n = num.rescaled(d), u = den.rescaled(d);
  i64 e0 = u.terms().begin()->first;
  const BigInt& c0 = u.terms().begin()->second;
  Rational shift(e0, d);
  Rational vn = n.is_zero() ? n.trunc() : *n.leading_exponent();
  // Coefficient of q^e in the quotient needs num up to e+e0 and the unit part up to e-(vn-e0).
  Rational tq = std::min({n.trunc() - shift, u.trunc() - shift, u.trunc() - 2 * shift + vn});

  QSeries quotient(d, tq);
  std::map<i64, BigInt> rem;
  for (const auto& [e, c] : n.terms()) rem.emplace_hint(rem.end(), e - e0, c);
  std::vector<std::pair<i64, BigInt>> unit;
  for (const auto& [e, c] : u.terms()) unit.emplace_back(e - e0, c);
  i64 maxn = arith::floor_div(arith::mul(tq.numerator(), d), tq.denominator());

  while (!rem.empty()) {
    auto it = rem.begin();
    if (it->first > maxn) break;
    i64 e = it->first;
    if (!mpz_divisible_p(it->second.get_mpz_t(), c0.get_mpz_t()))
      throw std::domain_error("series division is not exact over the integers");
    BigInt qc = it->second / c0;
    quotient.add_term(e, qc);
    for (const auto& [ue, uc] : unit) {
      i64 t = e + ue;
      if (t > maxn) break;
      auto [jt, inserted] = rem.try_emplace(t, 0);
      jt->second -= qc * uc;
      if (jt->second == 0) rem.erase(jt);
    }
  }
  return quotient;
}

Comparison equals_to_order(const QSeries& a, const QSeries& b, Rational T) {
  if (T > a.trunc() || T > b.trunc())
    throw std::invalid_argument("comparison order " + arith::to_string(T) + " exceeds a truncation bound");
  i64 d = arith::lcm(a.denom(), b.denom());
  QSeries ra = a.rescaled(d).truncated(T), rb = b.rescaled(d).truncated(T);
  auto ia = ra.terms().begin(), ib = rb.terms().begin();
  while (ia != ra.terms().end() || ib != rb.terms().end()) {
    i64 ea = ia == ra.terms().end() ? INT64_MAX : ia->first;
    i64 eb = ib == rb.terms().end() ? INT64_MAX : ib->first;
    i64 e = std::min(ea, eb);
    BigInt ca = ea == e ? ia->second : BigInt(0);
    BigInt cb = eb == e ? ib->second : BigInt(0);
    if (ca != cb) return {false, Mismatch{Rational(e, d), ca, cb}};
    if (ea == e) ++ia;
    if (eb == e) ++ib;
  }
  return {true, std::nullopt};
}

nlohmann::json bigint_to_json(const BigInt& c) {
  if (c.fits_slong_p()) return c.get_si();
  return c.get_str();
}

nlohmann::json to_json(const QSeries& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [n, c] : s.terms()) terms.push_back({n, bigint_to_json(c)});
  return {{"denom", s.denom()},
          {"trunc", {s.trunc().numerator(), s.trunc().denominator()}},
          {"terms", terms}};
}

QSeries series_from_json(const nlohmann::json& j) {
  QSeries s(j.at("denom").get<i64>(), Rational(j.at("trunc").at(0).get<i64>(), j.at("trunc").at(1).get<i64>()));
  for (const auto& t : j.at("terms")) {
    BigInt c = t.at(1).is_string() ? BigInt(t.at(1).get<std::string>()) : BigInt(t.at(1).get<long>());
    s.add_term(t.at(0).get<i64>(), c);
  }
  return s;
}

}  // namespace virtheta
