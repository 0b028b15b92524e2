#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace virtheta {

using i64 = std::int64_t;
using i128 = __int128;
using Rational = boost::rational<i64>;

namespace arith {

inline i64 mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in multiplication");
  return r;
}

inline i64 add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in addition");
  return r;
}

inline i64 sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in subtraction");
  return r;
}

inline i64 narrow(i128 x) {
  if (x > INT64_MAX || x < INT64_MIN) throw std::overflow_error("int64 overflow");
  return static_cast<i64>(x);
}

// Floor division and non-negative remainder for a signed dividend.
inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + (m < 0 ? -m : m) : r;
}

inline i64 lcm(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return mul(a / std::gcd(a, b), b < 0 ? -b : b);
}

// Largest r with r*r <= n.
inline i64 isqrt(i128 n) {
  if (n < 0) throw std::domain_error("isqrt of negative number");
  i128 r = static_cast<i128>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return narrow(r);
}

// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
struct Bezout {
  i64 g, x, y;
};
Bezout ext_gcd(i64 a, i64 b);

i64 powmod(i64 base, i64 exp, i64 m);
i64 invmod(i64 a, i64 m);
bool is_prime(i64 n);
bool is_squarefree(i64 n);

// Prime factorization as (prime, exponent) pairs in increasing order; n != 0, sign ignored.
std::vector<std::pair<i64, int>> factor(i64 n);

// Legendre symbol (a/p), p an odd prime.
int legendre(i64 a, i64 p);

// Some x with x*x = a mod p for an odd prime p and a quadratic residue a.
i64 sqrt_mod(i64 a, i64 p);

std::vector<i64> primes_up_to(i64 n);

i64 floor(const Rational& q);
std::string to_string(const Rational& q);
// Accepts "n", "n/d" and "-n/d".
Rational parse_rational(const std::string& s);

}  // namespace arith
}  // namespace virtheta
