#include "oracles.hpp"

#include "virtheta/bridge.hpp"
#include "virtheta/parse.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace virtheta;

TEST(ProductReduction, RootMinusTen) {
  for (i64 r : {1, 7, -3})
    for (i64 t : {1, 2}) {
      ProductReduction pr = product_reduction(r, 12, 2 * t, 30);
      Field K(-10);
      EXPECT_EQ(pr.coset.field.D(), -10);
      EXPECT_EQ(pr.coset.alpha, (QuadInt{5 * r, 2 * t}));
      EXPECT_EQ(pr.coset.ideal(), QIdeal::integer(K, 60) * named_prime(K, 2));
      EXPECT_EQ(pr.coset.d, Rational(1200));
    }
}

TEST(ProductReduction, Gaussian) {
  for (i64 p : {5, 13, 17}) {
    CosetSpec c = product_to_coset(1, 4 * p, 3, 4 * p);
    Field K(-1);
    EXPECT_EQ(c.field.D(), -1);
    EXPECT_EQ(c.ideal(), QIdeal::integer(K, 8 * p));
    EXPECT_EQ(c.d, Rational(16 * p));
  }
}

TEST(ProductReduction, RootMinusTwo) {
  ProductReduction pr = product_reduction(7, 6, -5, 12);
  Field K(-2);
  EXPECT_EQ(pr.h, 6);
  EXPECT_EQ(pr.coset.alpha, (QuadInt{14, -5}));
  EXPECT_EQ(pr.coset.ideal(), QIdeal::integer(K, 24));
  EXPECT_EQ(pr.coset.d, Rational(96));
  EXPECT_THROW(product_reduction(1, 0, 1, 3), std::invalid_argument);
}

TEST(ProductReduction, MatchesThetaProduct) {
  Rational T(25);
  for (auto [r, k, s, l] : std::vector<std::array<i64, 4>>{{1, 6, 1, 12}, {1, 12, 2, 30}, {3, 20, 1, 20}, {2, 3, 1, 5}}) {
    oracle::Series expect = oracle::mul(oracle::theta(r, k, T), oracle::theta(s, l, T), T);
    EXPECT_EQ(oracle::from_library(coset_theta_direct(product_to_coset(r, k, s, l), T)), expect);
  }
}

TEST(CosetTheta, ConjugateBranchAgrees) {
  CosetSpec c = product_to_coset(1, 12, 2, 30);
  const Field& K = c.field;
  QIdeal Jbar = c.ideal().conj();
  CosetSpec bar{K, K.conj(c.alpha), Jbar.lattice(), c.d};
  EXPECT_EQ(oracle::from_library(coset_theta_direct(bar, Rational(10))),
            oracle::from_library(coset_theta_direct(c, Rational(10))));
}

TEST(CosetTheta, DegenerateOffsetHasConstantTerm) {
  Field K(-2);
  CosetSpec c{K, {24, 0}, QIdeal::integer(K, 24).lattice(), Rational(96)};
  EXPECT_EQ(coset_theta_direct(c, Rational(3)).coeff(Rational(0)), 1);
}

TEST(CosetTheta, MatchesBoxScan) {
  for (i64 D : {-1, -2, -10, -30}) {
    Field K(D);
    oracle::Ring R{D};
    QIdeal J = QIdeal::integer(K, 6) * named_prime(K, D == -1 ? 5 : 7);
    Lattice2 L = J.lattice();
    CosetSpec c{K, {1, 2}, L, Rational(7, 2)};
    EXPECT_EQ(oracle::from_library(coset_theta_direct(c, Rational(40))),
              oracle::coset_theta(R, {1, 2}, L.A, L.B, L.C, Rational(7, 2), Rational(40)))
        << D;
  }
}

TEST(CosetTheta, ScalingInvariance) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    i64 D = std::vector<i64>{-1, -2, -10, -30}[rng() % 4];
    Field K(D);
    QuadInt alpha{static_cast<i64>(rng() % 7) - 3, static_cast<i64>(rng() % 5) - 2};
    if (alpha.is_zero()) continue;
    QIdeal J = QIdeal::integer(K, 2 + static_cast<i64>(rng() % 4));
    QuadInt v{static_cast<i64>(rng() % 5), 1};
    CosetSpec X{K, v, J.lattice(), Rational(1 + static_cast<i64>(rng() % 5))};
    Lattice2 L = J.lattice();
    CosetSpec aX{K, K.mul(alpha, v), hnf({K.mul(alpha, {L.A, 0}), K.mul(alpha, {L.B, L.C})}),
                 X.d * Rational(K.norm(alpha))};
    EXPECT_EQ(oracle::from_library(coset_theta_direct(aX, Rational(12))),
              oracle::from_library(coset_theta_direct(X, Rational(12))));
  }
}

TEST(CosetToRayClass, RootMinusTwoFixture) {
  CosetSpec c = product_to_coset(1, 6, 1, 12);
  Field K(-2);
  RayThetaSpec r = coset_to_rayclass(c);
  EXPECT_EQ(r.H.norm(), Rational(6));
  EXPECT_EQ(r.H, named_prime(K, 2) * named_prime(K, 3, true));
  EXPECT_EQ(r.scale, Rational(16));
  EXPECT_EQ(r.cls.group->conductor().ideal(), QIdeal::integer(K, 4) * named_prime(K, 2) * named_prime(K, 3));
  Rational T(30);
  EXPECT_EQ(oracle::from_library(ray_theta(r, T)), oracle::from_library(coset_theta_direct(c, T)));
}

TEST(CosetToRayClass, RootMinusTenFixture) {
  CosetSpec c = product_to_coset(1, 12, 2, 30);
  Field K(-10);
  RayThetaSpec r = coset_to_rayclass(c);
  EXPECT_EQ(r.H, named_prime(K, 5));
  EXPECT_EQ(r.scale, Rational(240));
  Rational T(6);
  EXPECT_EQ(oracle::from_library(ray_theta(r, T)), oracle::from_library(coset_theta_direct(c, T)));
}

TEST(CosetToRayClass, GaussianFixture) {
  // alpha = beta·(p-adic unit part) with H = conj(P) for p = 5 = (1+2i)(1-2i).
  Field K(-1);
  i64 p = 5;
  CosetSpec c{K, {1, 2}, QIdeal::integer(K, 8 * p).lattice(), Rational(16 * p)};
  RayThetaSpec r = coset_to_rayclass(c);
  EXPECT_EQ(r.H, QIdeal::principal(K, QuadInt{1, 2}));
  EXPECT_EQ(r.scale, Rational(16));
  Rational T(20);
  EXPECT_EQ(oracle::from_library(ray_theta(r, T)), oracle::from_library(coset_theta_direct(c, T)));
}

TEST(CosetToRayClass, RejectsOffsetInLattice) {
  Field K(-2);
  CosetSpec c{K, {24, 24}, QIdeal::integer(K, 24).lattice(), Rational(96)};
  EXPECT_THROW(coset_to_rayclass(c), std::invalid_argument);
}

TEST(Decompose, IndexOneIsIdentity) {
  CosetSpec c = product_to_coset(1, 6, 1, 12);
  auto parts = decompose_coset(c, c.lattice);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].alpha, c.alpha);
  EXPECT_EQ(parts[0].lattice, c.lattice);
}

TEST(Decompose, PartsSumToWhole) {
  Field K(-30);
  CosetSpec c{K, {1, 1}, QIdeal::integer(K, 2).lattice(), Rational(5)};
  Lattice2 sub = hnf({{4, 0}, {2, 4}});
  auto parts = decompose_coset(c, sub);
  EXPECT_EQ(parts.size(), 4u);
  QSeries total(5, Rational(20));
  for (const auto& x : parts) total += coset_theta_direct(x, Rational(20));
  EXPECT_EQ(oracle::from_library(total), oracle::from_library(coset_theta_direct(c, Rational(20))));
}

TEST(Decompose, LineTransversal) {
  LineCoset whole{1, 3, Rational(12)};
  for (i64 b : {1, 2, 4}) {
    auto parts = decompose_line(whole, 15, b);
    ASSERT_EQ(parts.size(), 5u);
    QSeries total(12, Rational(30));
    for (const auto& x : parts) total += line_theta(x, Rational(30));
    EXPECT_EQ(oracle::from_library(total), oracle::from_library(line_theta(whole, Rational(30))));
  }
  EXPECT_EQ(oracle::from_library(line_theta({1, 6, Rational(12)}, Rational(30))), oracle::theta(1, 3, Rational(30)));
  EXPECT_THROW(decompose_line(whole, 15, 5), std::invalid_argument);
  EXPECT_THROW(decompose_line(whole, 10, 1), std::invalid_argument);
}

Thm43Input thm43(const std::string& F, const std::string& Fp, const std::string& J, const std::string& Jp, i64 d) {
  Field K(-2), Kp(-1);
  return Thm43Input{parse_ideal(K, F), parse_ideal(Kp, Fp), parse_ideal(K, J), parse_ideal(Kp, Jp),
                    Rational(d), Rational(40), std::nullopt, std::nullopt};
}

TEST(CrossFieldRelation, Relations) {
  EXPECT_TRUE(check_thm43(thm43("4*P2", "8", "1", "1", 16)).pass);
  EXPECT_TRUE(check_thm43(thm43("4*P2", "8", "(1+2*w)", "3", 16)).pass);
  EXPECT_TRUE(check_thm43(thm43("4", "4*P2", "1", "1", 8)).pass);
}

TEST(CrossFieldRelation, SidesAreNontrivial) {
  auto sides = thm43_sides(thm43("4*P2", "8", "1", "1", 16));
  EXPECT_FALSE(sides.lhs.is_zero());
  EXPECT_EQ(sides.lhs.coeff(Rational(1, 16)), 1);
}

TEST(CrossFieldRelation, WrongNormPairFails) {
  EXPECT_FALSE(check_thm43(thm43("4*P2", "8", "1", "3", 16)).pass);
}

TEST(CrossFieldRelation, Errors) {
  EXPECT_THROW(check_thm43(thm43("4*P2", "4", "1", "1", 16)), std::invalid_argument);
  EXPECT_THROW(check_thm43(thm43("4*P2", "8", "P3", "2", 16)), std::invalid_argument);
}

TEST(ConductorDescent, RootMinusTwo) {
  Field K(-2);
  QIdeal F = QIdeal::integer(K, 4) * named_prime(K, 2);
  GroupPtr G = RayClassGroup::make(F);
  ASSets as = compute_A_S({-2, -1}, G);
  Thm44Input in{F, named_prime(K, 3), QIdeal::unit(K), as.A, as.S, Rational(16), Rational(40)};
  EXPECT_TRUE(check_thm44(in).pass);
  auto sides = thm44_sides(in);
  EXPECT_FALSE(sides.lhs.is_zero());
}

TEST(ConductorDescent, Gaussian) {
  Field K(-1);
  QIdeal F = QIdeal::integer(K, 8);
  GroupPtr G = RayClassGroup::make(F);
  ASSets as = compute_A_S({-1, -2}, G);
  Thm44Input in{F, QIdeal::principal(K, QuadInt{1, -2}), QIdeal::unit(K), as.A, as.S, Rational(16), Rational(40)};
  EXPECT_TRUE(check_thm44(in).pass);
}

TEST(ConductorDescent, HypothesisViolations) {
  Field K(-2);
  QIdeal F = QIdeal::integer(K, 4) * named_prime(K, 2);
  GroupPtr G = RayClassGroup::make(F);
  ASSets as = compute_A_S({-2, -1}, G);
  Thm44Input bad_p{F, named_prime(K, 2), QIdeal::unit(K), as.A, as.S, Rational(16), Rational(10)};
  EXPECT_THROW(check_thm44(bad_p), std::invalid_argument);
  Thm44Input bad_j{F, named_prime(K, 3), named_prime(K, 3), as.A, as.S, Rational(16), Rational(10)};
  EXPECT_THROW(check_thm44(bad_j), std::invalid_argument);
  Thm44Input bad_t{F, named_prime(K, 3), QIdeal::unit(K), as.A, as.A, Rational(16), Rational(10)};
  try {
    check_thm44(bad_t);
    ADD_FAILURE() << "expected a hypothesis error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("T is not"), std::string::npos);
  }
}

}  // namespace
