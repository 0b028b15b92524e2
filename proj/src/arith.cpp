#include "virtheta/arith.hpp"

#include <cctype>

namespace virtheta::arith {

Bezout ext_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

i64 powmod(i64 base, i64 exp, i64 m) {
  if (m == 1) return 0;
  i128 result = 1, b = mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = result * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return static_cast<i64>(result);
}

i64 invmod(i64 a, i64 m) {
  auto [g, x, y] = ext_gcd(mod(a, m), m);
  (void)y;
  if (g != 1) throw std::domain_error("no inverse modulo " + std::to_string(m));
  return mod(x, m);
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  i64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for 64-bit integers.
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    i128 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = x * x % n;
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::pair<i64, int>> factor(i64 n) {
  if (n == 0) throw std::domain_error("factor(0)");
  if (n < 0) n = -n;
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_squarefree(i64 n) {
  if (n == 0) return false;
  for (auto [p, e] : factor(n)) {
    if (e > 1) return false;
  }
  return true;
}

int legendre(i64 a, i64 p) {
  i64 r = powmod(mod(a, p), (p - 1) / 2, p);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

i64 sqrt_mod(i64 a, i64 p) {
  a = mod(a, p);
  if (a == 0) return 0;
  if (legendre(a, p) != 1) throw std::domain_error("not a quadratic residue");
  // Tonelli-Shanks.
  i64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  i64 z = 2;
  while (legendre(z, p) != -1) ++z;
  i128 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    int i = 0;
    i128 tt = t;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    i128 b = c;
    for (int j = 0; j < m - i - 1; ++j) b = b * b % p;
    m = i;
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  i64 root = static_cast<i64>(r);
  return std::min(root, p - root);
}

std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<size_t>(n) + 1, false);
  for (i64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

i64 floor(const Rational& q) { return floor_div(q.numerator(), q.denominator()); }

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

Rational parse_rational(const std::string& s) {
  auto parse_int = [&](const std::string& t) {
    size_t pos = 0;
    if (t.empty()) throw std::invalid_argument("malformed rational: '" + s + "'");
    i64 v = std::stoll(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("malformed rational: '" + s + "'");
    return v;
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_int(s));
  i64 den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  return Rational(parse_int(s.substr(0, slash)), den);
}

}  // namespace virtheta::arith
