#include "virtheta/parse.hpp"

#include <cctype>

namespace virtheta {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string s) : s_(std::move(s)) {}

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip();
    return pos_ >= s_.size();
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  bool accept(const std::string& word) {
    skip();
    if (s_.compare(pos_, word.size(), word) != 0) return false;
    pos_ += word.size();
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  i64 integer() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    try {
      return std::stoll(s_.substr(start, pos_ - start));
    } catch (const std::out_of_range&) {
      fail("integer out of range");
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }

 private:
  std::string s_;
  size_t pos_ = 0;
};

QuadInt element(const Field& K, Cursor& c) {
  QuadInt total;
  bool first = true;
  while (true) {
    i64 sign = 1;
    if (c.accept('+')) {
    } else if (c.accept('-')) {
      sign = -1;
    } else if (!first) {
      break;
    }
    first = false;
    i64 coef = 1;
    bool has_int = std::isdigit(static_cast<unsigned char>(c.peek()));
    if (has_int) coef = c.integer();
    bool star = c.accept('*');
    QuadInt unit{1, 0};
    if (c.accept('w')) {
      unit = K.omega();
    } else if (c.accept('s')) {
      unit = K.sqrtD();
    } else if (star || !has_int) {
      c.fail("expected w or s");
    }
    total = total + arith::mul(sign, coef) * unit;
    char n = c.peek();
    if (n != '+' && n != '-') break;
  }
  return total;
}

QIdeal ideal(const Field& K, Cursor& c);

QIdeal atom(const Field& K, Cursor& c) {
  char n = c.peek();
  if (std::isdigit(static_cast<unsigned char>(n))) return QIdeal::integer(K, c.integer());
  if (c.accept('P')) {
    i64 p = c.integer();
    bool bar = c.accept("bar");
    return named_prime(K, p, bar);
  }
  if (c.accept('(')) {
    std::vector<QuadInt> gens{element(K, c)};
    while (c.accept(',')) gens.push_back(element(K, c));
    c.expect(')');
    return QIdeal::from_gens(K, gens);
  }
  c.fail("expected an ideal factor");
}

int exponent(Cursor& c) {
  if (!c.accept('^')) return 1;
  i64 sign = c.accept('-') ? -1 : 1;
  if (sign == 1) c.accept('+');
  return static_cast<int>(sign * c.integer());
}

QIdeal ideal(const Field& K, Cursor& c) {
  QIdeal out = atom(K, c);
  out = power(out, exponent(c));
  while (true) {
    bool star = c.accept('*');
    char n = c.peek();
    bool starts = std::isdigit(static_cast<unsigned char>(n)) || n == 'P' || n == '(';
    if (!starts) {
      if (star) c.fail("expected an ideal factor after '*'");
      break;
    }
    QIdeal f = atom(K, c);
    out = out * power(f, exponent(c));
  }
  return out;
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

RayClassRef power(const RayClassRef& x, int e) {
  RayClassRef base = e < 0 ? inverse(x) : x;
  RayClassRef out = ray_class(x.group, QIdeal::unit(x.group->field()));
  for (int i = 0; i < std::abs(e); ++i) out = out * base;
  return out;
}

}  // namespace

QIdeal named_prime(const Field& K, i64 p, bool bar) {
  if (!arith::is_prime(p)) throw ParseError("P" + std::to_string(p) + " does not name a prime");
  auto ramified = [&](i64 q) {
    Splitting sp = split_prime(K, q);
    if (sp.kind != Splitting::Kind::ramified) throw std::logic_error("expected a ramified prime");
    return sp.primes.front();
  };
  std::optional<QIdeal> P;
  if (K.D() == -2 && p == 3) P = QIdeal::principal(K, QuadInt{1, 1});
  if (K.D() == -30 && p == 13) P = QIdeal::principal(K, QuadInt{10, 1}) / (ramified(2) * ramified(5));
  if (K.D() == -10 && p == 13) P = QIdeal::principal(K, QuadInt{5, 2}) / ramified(5);
  if (!P) {
    Splitting sp = split_prime(K, p);
    P = sp.kind == Splitting::Kind::inert ? QIdeal::integer(K, p) : sp.primes.front();
  }
  return bar ? P->conj() : *P;
}

QuadInt parse_element(const Field& K, const std::string& text) {
  Cursor c(text);
  QuadInt x = element(K, c);
  if (!c.done()) c.fail("trailing characters");
  return x;
}

QIdeal parse_ideal(const Field& K, const std::string& text) {
  Cursor c(text);
  QIdeal I = ideal(K, c);
  if (!c.done()) c.fail("trailing characters");
  return I;
}

RayClassRef parse_class(const GroupPtr& G, const std::string& text) {
  const Field& K = G->field();
  std::string head = text, crt_tail;
  int depth = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[' || text[i] == '(') ++depth;
    if (text[i] == ']' || text[i] == ')') --depth;
    if (text[i] == '@' && depth == 0) {
      head = text.substr(0, i);
      crt_tail = text.substr(i + 1);
      break;
    }
  }
  std::vector<std::string> items = split_top(head, '*');
  RayClassRef out = ray_class(G, QIdeal::unit(K));
  for (size_t idx = 0; idx < items.size(); ++idx) {
    Cursor c(items[idx]);
    c.expect('[');
    std::string rest = items[idx].substr(items[idx].find('[') + 1);
    size_t close = rest.rfind(']');
    if (close == std::string::npos) throw ParseError("unbalanced brackets in \"" + items[idx] + "\"");
    std::string body = rest.substr(0, close);
    Cursor tail(rest.substr(close + 1));
    int e = exponent(tail);
    if (!tail.done()) tail.fail("trailing characters");
    bool is_crt = idx + 1 == items.size() && !crt_tail.empty();
    RayClassRef x = out;
    if (is_crt) {
      Cursor t(crt_tail);
      if (!t.accept("F=")) t.fail("expected F= after '@'");
      std::vector<std::string> comps = split_top(crt_tail.substr(crt_tail.find('=') + 1), '*');
      std::vector<std::string> residues = split_top(body, ',');
      if (comps.size() != residues.size()) throw ParseError("CRT residues and factors differ in number");
      std::vector<std::pair<QIdeal, QuadInt>> parts;
      for (size_t i = 0; i < comps.size(); ++i) parts.emplace_back(parse_ideal(K, comps[i]), parse_element(K, residues[i]));
      x = crt_class(G, parts);
    } else {
      try {
        x = ray_class(G, parse_element(K, body));
      } catch (const ParseError&) {
        x = ray_class(G, parse_ideal(K, body));
      }
    }
    out = out * power(x, e);
  }
  return out;
}

}  // namespace virtheta
