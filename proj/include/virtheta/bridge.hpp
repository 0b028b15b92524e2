#pragma once

#include "virtheta/rayclass.hpp"
#include "virtheta/report.hpp"

namespace virtheta {

// The coset alpha + L of a lattice in O_K, with theta scale d.
struct CosetSpec {
  Field field{-1};
  QuadInt alpha;
  Lattice2 lattice;
  Rational d{1};

  // The lattice is closed under multiplication by ω.
  bool is_ideal() const;
  QIdeal ideal() const { return QIdeal::from_lattice(field, lattice); }
};

struct RayThetaSpec {
  RayClassRef cls;
  Rational scale;
  int weight = 1;
  QIdeal H;
};

// Data of the product reduction theta_{r,k}·theta_{s,ell} = theta(alpha + J; d).
struct ProductReduction {
  i64 h, k0, ell0, mu, lambda;
  CosetSpec coset;
};

ProductReduction product_reduction(i64 r, i64 k, i64 s, i64 ell);
CosetSpec product_to_coset(i64 r, i64 k, i64 s, i64 ell);

QSeries coset_theta_direct(const CosetSpec& spec, Rational trunc);
RayThetaSpec coset_to_rayclass(const CosetSpec& spec);
// w_F · theta([alpha H^{-1}]_F; d / N(H)).
QSeries ray_theta(const RayThetaSpec& spec, Rational trunc);

// Splits v + L into the cosets (v + w) + Lsub over a transversal w of L / Lsub.
std::vector<CosetSpec> decompose_coset(const CosetSpec& whole, const Lattice2& Lsub);

// The one-dimensional coset v + step·Z with theta scale d: sum of q^{(v + step n)^2 / d}.
struct LineCoset {
  i64 v = 0;
  i64 step = 1;
  Rational d{1};
};

QSeries line_theta(const LineCoset& x, Rational trunc);
// Transversal {0, b·step, ..., (c-1)·b·step} of step·Z over sub_step·Z, c = sub_step / step.
std::vector<LineCoset> decompose_line(const LineCoset& whole, i64 sub_step, i64 b);

// Both sides of A_F[J]_F - S_F[J]_F = A'_{F'}[J']_{F'} - S'_{F'}[J']_{F'}.
struct Thm43Input {
  QIdeal F, Fprime, J, Jprime;
  Rational d, trunc;
  // Precomputed A/S sets; computed on demand when absent.
  std::optional<ASSets> as, as_prime;
};

struct Thm43Sides {
  QSeries lhs, rhs;
};

Thm43Sides thm43_sides(const Thm43Input& in);
VerificationReport check_thm43(const Thm43Input& in, const std::string& name = "thm43");

struct Thm44Input {
  QIdeal F, P, J;
  std::vector<RayClassRef> B, T;
  Rational d, trunc;
};

// Throws std::invalid_argument naming every violated hypothesis.
void check_thm44_hypotheses(const Thm44Input& in);
// theta(B~[J]_{FP}) - theta(T~[J]_{FP}) against theta(B[J]_F) - theta(T[J]_F).
Thm43Sides thm44_sides(const Thm44Input& in);
VerificationReport check_thm44(const Thm44Input& in, const std::string& name = "thm44");

}  // namespace virtheta
