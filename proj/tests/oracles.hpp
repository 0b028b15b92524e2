#pragma once

// Brute-force reference implementations. None of them call the library's series, lattice or class code.

#include "virtheta/qseries.hpp"
#include "virtheta/quadfield.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

using virtheta::BigInt;
using virtheta::i64;
using virtheta::QSeries;
using virtheta::Rational;

using Series = std::map<Rational, BigInt>;

inline void add_term(Series& s, Rational e, const BigInt& c) {
  BigInt& slot = s[e];
  slot += c;
  if (slot == 0) s.erase(e);
}

inline Series from_library(const QSeries& q) {
  Series s;
  for (const auto& [n, c] : q.terms()) add_term(s, Rational(n, q.denom()), c);
  return s;
}

inline Series truncate(const Series& s, Rational T) {
  Series out;
  for (const auto& [e, c] : s)
    if (e <= T) out.emplace(e, c);
  return out;
}

inline Series add(const Series& a, const Series& b, int sign = 1) {
  Series out = a;
  for (const auto& [e, c] : b) add_term(out, e, sign * c);
  return out;
}

inline Series mul(const Series& a, const Series& b, Rational T) {
  Series out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b)
      if (ea + eb <= T) add_term(out, ea + eb, ca * cb);
  return out;
}

inline Series scale(const Series& a, const BigInt& k) {
  Series out;
  if (k == 0) return out;
  for (const auto& [e, c] : a) out.emplace(e, c * k);
  return out;
}

// θ_{ℓ,k} = Σ_n q^{(2kn+ℓ)^2 / 4k}.
inline Series theta(i64 ell, i64 k, Rational T) {
  Series s;
  i64 W = 4 + static_cast<i64>(std::sqrt(static_cast<double>(T.numerator()) / T.denominator() / k));
  i64 centre = -ell / (2 * k);
  for (i64 n = centre - W; n <= centre + W; ++n) {
    i64 x = 2 * k * n + ell;
    Rational e(x * x, 4 * k);
    if (e <= T) add_term(s, e, 1);
  }
  return s;
}

inline Series v_func(i64 r, i64 m, Rational T) {
  return add(theta(r, m * (m + 1), T), theta(r * (2 * m + 1), m * (m + 1), T), -1);
}

// q^{1/24} ∏_{n>=1} (1 - q^n), expanded as a dense integer polynomial.
inline Series eta(Rational T) {
  Rational shift(1, 24);
  if (T < shift) return {};
  i64 N = static_cast<i64>(((T - shift).numerator()) / (T - shift).denominator());
  std::vector<BigInt> poly(N + 1, 0);
  poly[0] = 1;
  for (i64 n = 1; n <= N; ++n)
    for (i64 e = N; e >= n; --e) poly[e] -= poly[e - n];
  Series s;
  for (i64 e = 0; e <= N; ++e)
    if (poly[e] != 0) s.emplace(Rational(e) + shift, poly[e]);
  return s;
}

// Integer arithmetic in Z[ω] written out from the minimal polynomial of ω.
struct Ring {
  i64 D;
  i64 t() const { return ((D % 4) + 4) % 4 == 1 ? 1 : 0; }
  i64 n() const { return t() ? (1 - D) / 4 : -D; }
  // (a + bω)(c + dω) with ω² = tω − n.
  std::pair<i64, i64> mul(std::pair<i64, i64> x, std::pair<i64, i64> y) const {
    auto [a, b] = x;
    auto [c, d] = y;
    return {a * c - b * d * n(), a * d + b * c + b * d * t()};
  }
  i64 norm(std::pair<i64, i64> x) const {
    auto [a, b] = x;
    return a * a + t() * a * b + n() * b * b;
  }
  std::pair<i64, i64> conj(std::pair<i64, i64> x) const { return {x.first + t() * x.second, -x.second}; }
  // x ∈ gO_K.
  bool divides(std::pair<i64, i64> g, std::pair<i64, i64> x) const {
    i64 N = norm(g);
    auto y = mul(x, conj(g));
    return y.first % N == 0 && y.second % N == 0;
  }
  std::vector<std::pair<i64, i64>> units() const {
    if (D == -1) return {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    if (D == -3) return {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
    return {{1, 0}, {-1, 0}};
  }
};

// Index in O_K of the Z-span of {g, gω : g ∈ gens}: gcd of all 2x2 minors.
inline i64 ideal_index(const Ring& R, const std::vector<std::pair<i64, i64>>& gens) {
  std::vector<std::pair<i64, i64>> vecs;
  for (auto g : gens) {
    vecs.push_back(g);
    vecs.push_back(R.mul(g, {0, 1}));
  }
  i64 g = 0;
  for (size_t i = 0; i < vecs.size(); ++i)
    for (size_t j = i + 1; j < vecs.size(); ++j)
      g = std::gcd(g, vecs[i].first * vecs[j].second - vecs[i].second * vecs[j].first);
  return std::llabs(g);
}

// Membership in the Z-lattice A·Z + (B + Cω)·Z.
inline bool in_lattice(i64 A, i64 B, i64 C, i64 x0, i64 x1) {
  if (x1 % C != 0) return false;
  return (x0 - (x1 / C) * B) % A == 0;
}

// Σ q^{N(x)/d} over x ∈ α + (A·Z + (B + Cω)·Z), by a box scan of Z[ω].
inline Series coset_theta(const Ring& R, std::pair<i64, i64> alpha, i64 A, i64 B, i64 C, Rational d, Rational T) {
  Series s;
  Rational M = d * T;
  i64 Mi = M.numerator() / M.denominator();
  // N(x0 + x1ω) >= x1²·|disc|/4 and >= (x0 + t·x1/2)².
  i64 disc = R.t() ? -R.D : -4 * R.D;
  i64 X1 = static_cast<i64>(std::sqrt(4.0 * Mi / disc)) + 2;
  for (i64 x1 = -X1; x1 <= X1; ++x1) {
    i64 X0 = static_cast<i64>(std::sqrt(static_cast<double>(Mi))) + std::llabs(x1) + 2;
    for (i64 x0 = -X0; x0 <= X0; ++x0) {
      i64 N = R.norm({x0, x1});
      if (Rational(N) > M) continue;
      if (!in_lattice(A, B, C, x0 - alpha.first, x1 - alpha.second)) continue;
      add_term(s, Rational(N) / d, 1);
    }
  }
  return s;
}

inline std::string show(const Series& s, size_t max_terms = 8) {
  std::string out;
  size_t i = 0;
  for (const auto& [e, c] : s) {
    if (i++ == max_terms) return out + " + ...";
    out += (out.empty() ? "" : " + ") + c.get_str() + "q^" + std::to_string(e.numerator()) + "/" +
           std::to_string(e.denominator());
  }
  return out.empty() ? "0" : out;
}

}  // namespace oracle
