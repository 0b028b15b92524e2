#pragma once

#include "virtheta/qseries.hpp"
#include "virtheta/quadfield.hpp"

#include <memory>
#include <mutex>
#include <set>

namespace virtheta {

// Raised when an ideal or element is not prime to the conductor.
struct NotCoprimeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// λ/μ has nonzero valuation at a prime dividing the conductor.
struct NotApplicableError : std::domain_error {
  using std::domain_error::domain_error;
};

// An enumeration bound was exhausted before a computation could be completed.
struct BoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Conductor {
 public:
  explicit Conductor(const QIdeal& F);

  const QIdeal& ideal() const { return F_; }
  const Field& field() const { return F_.field(); }
  const std::map<QIdeal, int>& factorization() const { return factors_; }
  bool self_conjugate() const { return self_conj_; }
  i64 norm() const { return norm_; }
  // v_P(I) = 0 for every P | F.
  bool coprime_to(const QIdeal& I) const;
  // This conductor divides (contains) G.
  bool divides(const Conductor& G) const { return F_.divides(G.F_); }

  friend bool operator==(const Conductor& x, const Conductor& y) { return x.F_ == y.F_; }

 private:
  QIdeal F_;
  std::map<QIdeal, int> factors_;
  bool self_conj_;
  i64 norm_;
};

// O_K / F with canonical representatives a + b·ω, 0 <= b < C, 0 <= a < A for the HNF of F.
class ResidueRing {
 public:
  explicit ResidueRing(const Conductor& F);

  QuadInt reduce(QuadInt x) const;
  QuadInt mul(QuadInt x, QuadInt y) const { return reduce(K_.mul(reduce(x), reduce(y))); }
  QuadInt pow(QuadInt x, i64 e) const;
  bool is_unit(QuadInt x) const;
  QuadInt inverse(QuadInt x) const;
  // |(O_K/F)^×|.
  i64 phi() const { return phi_; }
  i64 size() const { return L_.index(); }
  std::vector<QuadInt> elements() const;
  bool congruent(QuadInt x, QuadInt y) const { return L_.contains(x - y); }

 private:
  Field K_;
  Lattice2 L_;
  i64 phi_;
};

std::pair<std::vector<QuadInt>, int> units_mod_F(const Conductor& F);
bool in_K1F(QuadInt lam, QuadInt mu, const Conductor& F);
bool same_ray_class(const QIdeal& I, const QIdeal& J, const Conductor& F);

// Class invariant: index of the ideal class plus a unit-normalized residue mod F.
struct ClassSig {
  int ideal_class = 0;
  QuadInt residue;
  friend auto operator<=>(const ClassSig&, const ClassSig&) = default;
};

class RayClassGroup;
using GroupPtr = std::shared_ptr<const RayClassGroup>;

struct RayClassRef {
  GroupPtr group;
  QIdeal rep;
  ClassSig sig;

  QIdeal canonical_key() const;
  friend bool operator==(const RayClassRef& x, const RayClassRef& y) { return x.sig == y.sig; }
  friend bool operator<(const RayClassRef& x, const RayClassRef& y) { return x.sig < y.sig; }
};

class RayClassGroup {
 public:
  static GroupPtr make(const Conductor& F);
  static GroupPtr make(const QIdeal& F) { return make(Conductor(F)); }

  const Conductor& conductor() const { return F_; }
  const Field& field() const { return F_.field(); }
  const ResidueRing& ring() const { return ring_; }
  i64 class_number() const { return static_cast<i64>(reps_.size()); }
  i64 order() const { return order_; }
  int w_F() const { return w_F_; }

  ClassSig signature(const QIdeal& I) const;
  // Residue mod F of γ ∈ K with v_P(γ) = 0 for all P | F.
  QuadInt element_residue(const KElt& gamma) const;
  QuadInt canonical_residue(QuadInt r) const;

  // First integral ideal (in norm, HNF order) of every class whose norm is prime to `avoid`.
  std::map<ClassSig, QIdeal> class_table(i64 avoid = 1, i64 initial_bound = 0) const;
  QIdeal canonical_key(const ClassSig& s) const;

  static constexpr i64 kEnumerationCap = i64{1} << 22;

 private:
  explicit RayClassGroup(const Conductor& F);
  void build_class_reps();

  Conductor F_;
  ResidueRing ring_;
  std::vector<QuadInt> units_F_;
  int w_F_;
  std::vector<QIdeal> reps_;
  std::vector<QuadInt> rep_norm_inv_;
  i64 order_;

  mutable std::mutex mu_;
  mutable std::map<QIdeal, ClassSig> sig_cache_;
  mutable std::map<i64, std::map<ClassSig, QIdeal>> tables_;
};

RayClassRef ray_class(const GroupPtr& G, const QIdeal& I);
RayClassRef ray_class(const GroupPtr& G, const KElt& gamma);
RayClassRef ray_class(const GroupPtr& G, QuadInt gamma);
RayClassRef operator*(const RayClassRef& x, const RayClassRef& y);
RayClassRef inverse(const RayClassRef& x);
// All classes of C_F(K), ordered by canonical key.
std::vector<RayClassRef> all_classes(const GroupPtr& G);

RayClassRef crt_class(const GroupPtr& G, const std::vector<std::pair<QIdeal, QuadInt>>& components);
RayClassRef reduce_class(const RayClassRef& x, const GroupPtr& target);
std::vector<RayClassRef> lift_subgroup(const std::vector<RayClassRef>& B, const GroupPtr& larger);

struct CharacterPsi {
  i64 D;
  i64 Dprime;
};

// φ'(n): product of Legendre symbols (D'/p) over the prime factors of n, with multiplicity.
int phi_prime(i64 Dprime, i64 n);
int psi_value(const CharacterPsi& chi, const QIdeal& I);
int psi_class(const CharacterPsi& chi, const RayClassRef& x);
QIdeal psi_conductor(i64 D, i64 Dprime);
bool admissible(const Conductor& F, const Conductor& Fprime, i64 D, i64 Dprime);

struct ASSets {
  std::vector<RayClassRef> A;
  std::vector<RayClassRef> S;
};

// bound = 0 selects 30·N(F).
ASSets compute_A_S(const CharacterPsi& chi, const GroupPtr& G, i64 bound = 0);

// {D, Dp, F: HNF triple, A: [...], S: [...]} with every class given by the HNF triple of its canonical key.
nlohmann::json as_sets_to_json(const CharacterPsi& chi, const GroupPtr& G, const ASSets& as);
// Throws std::invalid_argument when the document belongs to a different (D, D', F).
ASSets as_sets_from_json(const nlohmann::json& j, const CharacterPsi& chi, const GroupPtr& G);

using ClassCombo = std::vector<std::pair<i64, RayClassRef>>;

// A[J] - S[J].
ClassCombo skew_combo(const ASSets& as, const RayClassRef& J);
QSeries ray_theta(const ClassCombo& W, Rational d, Rational trunc);

}  // namespace virtheta
