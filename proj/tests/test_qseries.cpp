#include "oracles.hpp"

#include "virtheta/qseries.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace virtheta;
using oracle::Series;

Series lib(const QSeries& s) { return oracle::from_library(s); }

Series terms(std::initializer_list<std::tuple<i64, i64, i64>> ts) {
  Series s;
  for (auto [n, d, c] : ts) oracle::add_term(s, Rational(n, d), c);
  return s;
}

TEST(Theta, Level6Index1) {
  EXPECT_EQ(lib(theta_gen({1, 6}, Rational(8))), terms({{1, 24, 1}, {121, 24, 1}, {169, 24, 1}}));
}

TEST(Theta, JacobiTheta3) {
  EXPECT_EQ(lib(theta_gen({0, 1}, Rational(9))), terms({{0, 1, 1}, {1, 1, 2}, {4, 1, 2}, {9, 1, 2}}));
}

TEST(Theta, MatchesBruteForce) {
  for (i64 k = 1; k <= 12; ++k)
    for (i64 ell = -3 * k; ell <= 3 * k; ++ell)
      EXPECT_EQ(lib(theta_gen({ell, k}, Rational(15, 2))), oracle::theta(ell, k, Rational(15, 2))) << ell << "," << k;
}

TEST(Theta, RejectsBadLevel) {
  EXPECT_THROW(theta_gen({1, 0}, Rational(1)), std::invalid_argument);
  EXPECT_THROW(theta_gen({1, 1}, Rational(-1)), std::invalid_argument);
}

TEST(Eta, PentagonalSigns) {
  EXPECT_EQ(lib(eta(Rational(8))), terms({{1, 24, 1}, {25, 24, -1}, {49, 24, -1}, {121, 24, 1}, {169, 24, 1}}));
}

TEST(Eta, LeadingCoefficient) {
  QSeries e = eta(Rational(3));
  EXPECT_EQ(*e.leading_exponent(), Rational(1, 24));
  EXPECT_EQ(e.coeff(Rational(1, 24)), 1);
}

TEST(Eta, EqualsV12) {
  Rational T(40);
  EXPECT_TRUE(equals_to_order(eta(T), v_func(1, 2, T), T).equal);
  EXPECT_EQ(lib(eta(T)), oracle::eta(T));
}

TEST(VFunc, Symmetries) {
  Rational T(12);
  for (i64 m = 2; m <= 6; ++m) {
    i64 k = m * (m + 1);
    for (i64 r = -2 * k; r <= 2 * k; r += 3) {
      Series v = lib(v_func(r, m, T));
      EXPECT_EQ(v, oracle::v_func(r, m, T));
      EXPECT_EQ(v, lib(v_func(-r, m, T)));
      EXPECT_EQ(v, lib(v_func(r + 2 * k, m, T)));
      EXPECT_EQ(lib(v_func(r * (2 * m + 1), m, T)), oracle::scale(v, -1));
    }
    EXPECT_TRUE(v_func(k, m, T).is_zero());
  }
}

TEST(VirasoroChar, TimesEtaIsV) {
  Rational T(15);
  for (i64 m = 3; m <= 6; ++m)
    for (i64 r = 1; r < m; ++r)
      for (i64 s = 1; s <= r; ++s) {
        QSeries chi = virasoro_char(r, s, m, T);
        QSeries prod = chi * eta(T);
        Rational upto = std::min(prod.trunc(), T);
        EXPECT_TRUE(equals_to_order(prod, v_func(r * (m + 1) - s * m, m, T), upto).equal) << r << "," << s << "," << m;
      }
}

TEST(VirasoroChar, VacuumLeadsWithOne) {
  QSeries chi = virasoro_char(1, 1, 3, Rational(10));
  EXPECT_EQ(chi.terms().begin()->second, 1);
}

TEST(VirasoroChar, DivideVByEta) {
  Rational T(12);
  QSeries chi = divide_by_unit(v_func(1, 3, T), eta(T));
  QSeries direct = virasoro_char(1, 1, 3, T);
  Rational upto = std::min(chi.trunc(), direct.trunc());
  EXPECT_TRUE(equals_to_order(chi, direct, upto).equal);
}

TEST(Arithmetic, AddNegMul) {
  Rational T(10);
  QSeries a = theta_gen({1, 6}, T);
  EXPECT_TRUE((a + (-a)).is_zero());
  EXPECT_EQ(lib(a * QSeries::constant(1, T)), lib(a));
  QSeries b = theta_gen({1, 12}, T);
  EXPECT_EQ(lib(a * b), oracle::mul(oracle::theta(1, 6, T), oracle::theta(1, 12, T), T));
}

TEST(Arithmetic, ProductTruncatesToMinimum) {
  QSeries a = theta_gen({0, 1}, Rational(9)), b = theta_gen({0, 1}, Rational(4));
  EXPECT_EQ((a * b).trunc(), Rational(4));
}

TEST(Division, EtaByEtaIsOne) {
  Rational T(20);
  QSeries one = divide_by_unit(eta(T), eta(T));
  EXPECT_EQ(lib(one), terms({{0, 1, 1}}));
}

TEST(Division, RoundTripOnRandomSparse) {
  std::mt19937_64 rng(7);
  Rational T(25);
  for (int trial = 0; trial < 50; ++trial) {
    QSeries a(2, T);
    for (int i = 0; i < 6; ++i) a.add_term(static_cast<i64>(rng() % 40), static_cast<long>(rng() % 11) - 5);
    QSeries q = divide_by_unit(a * eta(T), eta(T));
    Rational upto = std::min(q.trunc(), a.trunc());
    EXPECT_TRUE(equals_to_order(q, a, upto).equal);
  }
}

TEST(Division, Errors) {
  EXPECT_THROW(divide_by_unit(eta(Rational(2)), QSeries(1, Rational(2))), std::domain_error);
  QSeries two = QSeries::constant(2, Rational(5));
  EXPECT_THROW(divide_by_unit(QSeries::constant(1, Rational(5)), two), std::domain_error);
}

TEST(Compare, SelfEqual) {
  QSeries a = theta_gen({3, 7}, Rational(20));
  EXPECT_TRUE(equals_to_order(a, a, Rational(20)).equal);
}

TEST(Compare, FirstMismatch) {
  auto c = equals_to_order(theta_gen({1, 6}, Rational(2)), theta_gen({5, 6}, Rational(2)), Rational(2));
  ASSERT_FALSE(c.equal);
  EXPECT_EQ(c.first_mismatch->exponent, Rational(1, 24));
  EXPECT_EQ(c.first_mismatch->lhs, 1);
  EXPECT_EQ(c.first_mismatch->rhs, 0);
}

TEST(Compare, ShiftedIndex) {
  EXPECT_TRUE(equals_to_order(theta_gen({1, 6}, Rational(10)), theta_gen({13, 6}, Rational(10)), Rational(10)).equal);
}

TEST(Compare, OrderBeyondTruncationThrows) {
  EXPECT_THROW(equals_to_order(eta(Rational(2)), eta(Rational(3)), Rational(3)), std::invalid_argument);
}

TEST(Json, RoundTrip) {
  QSeries a = v_func(5, 4, Rational(30)) * BigInt("123456789012345678901234567890");
  nlohmann::json j = to_json(a);
  EXPECT_EQ(j.at("denom"), a.denom());
  EXPECT_EQ(lib(series_from_json(j)), lib(a));
  auto ts = j.at("terms");
  for (size_t i = 1; i < ts.size(); ++i) EXPECT_LT(ts[i - 1][0].get<i64>(), ts[i][0].get<i64>());
}

TEST(Series, NegativeExponentsAllowed) {
  QSeries a = QSeries::monomial(Rational(-1, 3), 4, Rational(2));
  EXPECT_EQ(a.coeff(Rational(-1, 3)), 4);
  EXPECT_EQ(*a.leading_exponent(), Rational(-1, 3));
}

TEST(Series, NormalizedDenominator) {
  QSeries a(12, Rational(3));
  a.add_term(6, 1);
  a.add_term(18, 2);
  EXPECT_EQ(a.normalized().denom(), 2);
  EXPECT_EQ(lib(a.normalized()), lib(a));
}

}  // namespace

namespace {

TEST(Arithmetic, RingLawsOnRandomSparse) {
  std::mt19937_64 rng(11);
  auto random_series = [&](Rational T) {
    i64 denom = std::vector<i64>{1, 2, 3, 24}[rng() % 4];
    QSeries s(denom, T);
    for (int i = 0; i < 5; ++i) s.add_term(static_cast<i64>(rng() % (8 * denom)), static_cast<long>(rng() % 9) - 4);
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    Rational T(6);
    QSeries a = random_series(T), b = random_series(T), c = random_series(T);
    EXPECT_EQ(lib(a * b), lib(b * a));
    EXPECT_EQ(lib((a * b) * c), lib(a * (b * c)));
    EXPECT_EQ(lib(a * (b + c)), lib(a * b + a * c));
    EXPECT_EQ(lib(a * b), oracle::mul(lib(a), lib(b), T));
  }
}

}  // namespace
