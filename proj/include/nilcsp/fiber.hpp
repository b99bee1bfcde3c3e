#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "nilcsp/finite_group.hpp"

namespace nilcsp {

// (x, y) with x the adapted-basis log coordinates of an element of the hull
// group P1 and y an element of the finite group P2.
struct FiberElement {
  ZVector x;
  Element y = 0;
  friend bool operator==(const FiberElement& a, const FiberElement& b) { return a.x == b.x && a.y == b.y; }
};

// U = P1 x_Q P2 for a torsion-free hull group P1, a finite group P2 and
// epimorphisms pi_i onto a finite group Q. pi1 is given by the images of
// exp(b_i) for the adapted basis b_i; pi2 by generator images.
class FiberGroup {
 public:
  FiberGroup(LatticeGroupPtr p1, FiniteGroup p2, FiniteGroup q, std::vector<Element> pi1_images,
             std::vector<Element> p2_generators, std::vector<Element> p2_images);
  // Q trivial
  static FiberGroup direct(LatticeGroupPtr p1, FiniteGroup p2);

  const LatticeGroupPtr& p1() const { return p1_; }
  const FiniteGroup& p2() const { return p2_; }
  const FiniteGroup& q() const { return q_; }
  const std::vector<Element>& pi1_images() const { return pi1_images_; }
  const std::vector<Element>& p2_generators() const { return p2_gens_; }
  const std::vector<Element>& p2_images() const { return p2_images_; }
  std::size_t dim() const { return p1_->dim(); }

  Element pi1(const ZVector& x) const;
  Element pi1_code(Element code_mod_base) const { return pi1_map_[code_mod_base]; }
  Element pi2(Element y) const { return pi2_map_[y]; }
  const std::vector<Element>& pi2_map() const { return pi2_map_; }
  const CongruenceQuotient& base_quotient() const { return *base_; }
  std::int64_t base_scale() const { return base_->scale(); }
  std::int64_t p2_exponent() const { return p2_exponent_; }

  bool contains(const FiberElement& g) const;
  FiberElement identity() const;
  FiberElement mul(const FiberElement& a, const FiberElement& b) const;
  FiberElement inv(const FiberElement& a) const;

  // Lifts (exp b_i, y_i) of the basis and generators (e, z) of ker pi2.
  std::vector<FiberElement> standard_generators() const;
  FiberElement basis_lift(std::size_t i) const;

 private:
  LatticeGroupPtr p1_;
  FiniteGroup p2_, q_;
  std::vector<Element> pi1_images_, p2_gens_, p2_images_;
  std::shared_ptr<const CongruenceQuotient> base_;
  std::vector<Element> pi1_map_, pi2_map_;
  std::int64_t p2_exponent_ = 1;
};

std::int64_t group_exponent(const FiniteGroup& g);

// Fiber product of two finite groups along Q; the pairs list gives element i.
struct FiniteFiberProduct {
  FiniteGroup group;
  std::vector<std::pair<Element, Element>> pairs;
};
FiniteFiberProduct finite_fiber_product(const FiniteGroup& p1, const FiniteGroup& p2,
                                        const std::vector<Element>& pi1, const std::vector<Element>& pi2);

// tor(U) = {(e, y) : y in ker pi2}.
struct TorsionSubgroup {
  FiniteGroup group;
  std::vector<Element> embedding;  // element index -> y in P2
};
TorsionSubgroup torsion_subgroup(const FiberGroup& u);

// U / N_S with N_S = exp(S Lambda) x {e}; S must be a congruence scale and a
// multiple of the base scale through which pi1 factors.
class FiberQuotient {
 public:
  FiberQuotient(const FiberGroup& u, std::int64_t scale);
  std::int64_t scale() const { return s_; }
  std::size_t order() const { return pairs_->size(); }
  const FiniteGroup& group() const { return group_; }
  const CongruenceQuotient& delta_quotient() const { return *cq_; }
  Element encode(const FiberElement& g) const;
  FiberElement representative(Element f) const;
  Element delta_code(Element f) const { return (*pairs_)[f].first; }
  Element p2_part(Element f) const { return (*pairs_)[f].second; }
  std::vector<Element> torsion_image() const;

 private:
  const FiberGroup* u_;
  std::int64_t s_;
  std::shared_ptr<const CongruenceQuotient> cq_;
  std::shared_ptr<std::vector<std::pair<Element, Element>>> pairs_;
  std::shared_ptr<std::vector<std::int32_t>> index_;
  FiniteGroup group_;
};

// Scale used for level m: congruence scale of m * exp(P2).
std::int64_t level_scale(const FiberGroup& u, std::int64_t m);

// Smallest t <= cap with image(tor) meeting F^t trivially in F = U / N_S,
// S = level_scale(u, t). A valid t, not always the minimal one over U.
std::int64_t find_t(const FiberGroup& u, std::int64_t cap);

// U/U^m and Delta/Delta^m, both computed inside F = U / N_S with
// S = level_scale(u, m), which satisfies N_S <= U^m.
class LevelQuotients {
 public:
  LevelQuotients(const FiberGroup& u, std::int64_t m);
  std::int64_t m() const { return m_; }
  const FiberQuotient& f() const { return f_; }
  const Quotient& gamma_m() const { return gamma_m_; }  // F / F^m
  const Quotient& delta_m() const { return delta_m_; }  // (Delta/Delta_S) / power subgroup
  const FiniteGroup& delta_s() const { return delta_s_; }
  const std::vector<bool>& power_subgroup_of_f() const { return fm_; }
  Element reduce(const FiberElement& g) const { return gamma_m_.coset_of[f_.encode(g)]; }
  Element reduce_delta(const ZVector& x) const {
    return delta_m_.coset_of[f_.delta_quotient().encode(x)];
  }
  // Delta/Delta^m image of a class of U/U^m
  Element delta_of(Element gm) const {
    return delta_m_.coset_of[f_.delta_code(gamma_m_.representative[gm])];
  }

 private:
  std::int64_t m_;
  FiberQuotient f_;
  FiniteGroup delta_s_;
  std::vector<bool> fm_;
  Quotient gamma_m_, delta_m_;
};

struct RhoReport {
  std::int64_t m = 0, scale = 0;
  std::size_t f_order = 0, gamma_m_order = 0, delta_m_order = 0;
  std::size_t torsion_meets_power = 0;  // |image(tor) cap F^m|
  std::size_t image_size = 0, fiber_size = 0;
  bool injective = false, surjective = false;
};
// rho: U -> Delta x_{Delta/Delta^m} U/U^m, checked on F.
RhoReport check_rho(const FiberGroup& u, std::int64_t m);

// ---- automorphisms ----

// sigma(x, y) = (x A, sigma2(y)) with A an integral Lie automorphism matrix
// in adapted coordinates and sigma2 an element map of P2.
struct ProductAutomorphism {
  ZMatrix A;
  std::vector<Element> sigma2;
  FiberElement apply(const FiberElement& g) const;
};

struct LiftAttempt {
  std::optional<ProductAutomorphism> aut;
  std::string error;
  std::optional<Element> witness;  // element of Q where the induced maps differ
};
LiftAttempt lift_automorphism(const FiberGroup& u, const ZMatrix& A, const std::vector<Element>& sigma2);

using FiberMap = std::function<FiberElement(const FiberElement&)>;
struct AutCheck {
  bool ok = true;
  std::string failure;
};
// On F = U / N_S: the map preserves U, is bijective and multiplicative
// (exhaustive up to 512 elements, else `samples` seeded pairs), and fixes
// tor(U) setwise.
AutCheck verify_on_quotient(const FiberGroup& u, const FiberMap& map, std::int64_t scale,
                            std::uint64_t seed = 0, std::size_t samples = 10000);
// pr1 o sigma = sigma1 o pr1 and pr2 o sigma = sigma2 o pr2 on F representatives.
AutCheck verify_projections(const FiberGroup& u, const ProductAutomorphism& s, std::int64_t scale);

// ---- Gamma* ----

struct GammaStarReport {
  std::size_t d = 0;                // rank of Delta*
  std::size_t free_rank = 0;        // rank of Gamma* from the relation matrix
  ZMatrix relations;                // rows: commutator relations in generator exponents
  std::vector<Integer> invariants;  // Smith invariants of the relation matrix
  ZMatrix to_delta;                 // Gamma* -> Delta* on the basis lifts
  ZMatrix from_delta;               // Delta* -> Gamma*
  bool ok = false;
  std::string failure;
};
GammaStarReport gamma_star_check(const FiberGroup& u);

// ---- the finite kernel K~ ----

struct KTilde {
  std::vector<std::vector<Element>> tuples;  // a_i as elements of P2 (tor = (e, a_i))
  std::vector<std::vector<Element>> maps;    // induced automorphisms of F
  std::int64_t scale = 0;
  bool closed = false;                       // closed under composition
};
// All maps g_i -> g_i a_i (a_i in tor) that extend to automorphisms of U,
// certified on F = U / N_S with t | S.
KTilde ia_kernel_enum(const FiberGroup& u, const std::vector<FiberElement>& gens,
                      std::size_t cap = 100000);

// ---- lifting automorphisms of U/U^m ----

struct RoundTrip {
  bool ok = false;
  std::string error;
  FiberMap alpha;  // the constructed automorphism of U
};
// alpha_m: automorphism of U/U^m (element map of LevelQuotients::gamma_m),
// beta: IA* matrix of the hull compatible with alpha_m on Delta/Delta^m.
// Builds alpha via rho and checks that it reduces to alpha_m, induces beta
// on Delta, is an automorphism on a finite quotient and acts trivially on Gamma*.
RoundTrip lift_from_level(const FiberGroup& u, const LevelQuotients& lq, const ZMatrix& beta,
                           const std::vector<Element>& alpha_m, std::int64_t t);

// Induced map of a fiber automorphism on U/U^m (requires it to descend).
std::vector<Element> reduce_automorphism(const LevelQuotients& lq, const FiberMap& map);

}  // namespace nilcsp
