#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nilcsp/hull.hpp"

namespace nilcsp {

// Finite group on elements 0..N-1, either backed by a Cayley table or by a
// multiplication functor (for quotients too large to tabulate).
class FiniteGroup {
 public:
  using Element = std::uint32_t;
  using MulFn = std::function<Element(Element, Element)>;
  using InvFn = std::function<Element(Element)>;

  FiniteGroup() = default;
  // Validates that every row and column is a permutation and that an
  // identity exists. Associativity is checked separately.
  static FiniteGroup from_table(std::vector<std::vector<Element>> table);
  static FiniteGroup from_law(std::size_t order, Element identity, MulFn mul, InvFn inv);

  static FiniteGroup cyclic(std::size_t n);
  static FiniteGroup symmetric(std::size_t n);  // n <= 5
  static FiniteGroup dihedral(std::size_t n);   // order 2n
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

  std::size_t order() const { return order_; }
  Element identity() const { return identity_; }
  Element mul(Element a, Element b) const {
    return table_.empty() ? mul_(a, b) : table_[static_cast<std::size_t>(a) * order_ + b];
  }
  Element inv(Element a) const { return inverse_.empty() ? inv_(a) : inverse_[a]; }
  Element pow(Element a, long long e) const;
  std::size_t element_order(Element a) const;

  bool has_table() const { return !table_.empty(); }
  // Tabulated copy; throws CapExceeded above `cap` elements.
  FiniteGroup materialized(std::size_t cap = 4096) const;
  std::vector<std::vector<Element>> cayley() const;

 private:
  std::size_t order_ = 0;
  Element identity_ = 0;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  MulFn mul_;
  InvFn inv_;
};

using Element = FiniteGroup::Element;

struct AxiomReport {
  bool ok = true;
  bool exhaustive = false;
  std::string failure;
};
// Exhaustive associativity up to `exhaustive_limit` elements, otherwise
// `samples` random triples.
AxiomReport check_group_axioms(const FiniteGroup& g, std::uint64_t seed,
                               std::size_t exhaustive_limit = 512, std::size_t samples = 10000);

// Subgroup generated by the given elements, as a membership bitmap.
std::vector<bool> subgroup_closure(const FiniteGroup& g, const std::vector<Element>& gens);
std::vector<Element> members(const std::vector<bool>& bitmap);
bool is_normal(const FiniteGroup& g, const std::vector<bool>& sub,
               const std::vector<Element>& generators_of_g);
std::vector<bool> normal_closure(const FiniteGroup& g, const std::vector<Element>& gens,
                                 const std::vector<Element>& generators_of_g);
// <g^t : g in G>
std::vector<bool> power_subgroup(const FiniteGroup& g, long long t);

struct Quotient {
  FiniteGroup group;
  std::vector<Element> coset_of;        // element -> coset index
  std::vector<Element> representative;  // coset -> element
};
Quotient quotient_group(const FiniteGroup& g, const std::vector<bool>& normal_sub);

// Small generating set (greedy, deterministic).
std::vector<Element> generating_set(const FiniteGroup& g);

// Extends x_i -> y_i to a homomorphism g -> h, or nullopt if that is not
// well defined. `gens` must generate g.
std::optional<std::vector<Element>> extend_homomorphism(const FiniteGroup& g,
                                                        const std::vector<Element>& gens,
                                                        const std::vector<Element>& images,
                                                        const FiniteGroup& h);
bool is_bijective(const std::vector<Element>& map, std::size_t order);

// All automorphisms as element maps; throws CapExceeded past `cap`.
std::vector<std::vector<Element>> automorphisms(const FiniteGroup& g, std::size_t cap = 100000);

// Delta / Delta_s for a congruence scale s, on coordinate vectors mod s
// (mixed radix encoding with digit i = coordinate i).
class CongruenceQuotient {
 public:
  CongruenceQuotient(LatticeGroupPtr delta, std::int64_t scale);
  const LatticeGroup& delta() const { return *delta_; }
  std::int64_t scale() const { return s_; }
  std::size_t order() const { return order_; }
  Element encode(const std::int64_t* coords) const;
  void decode(Element e, std::int64_t* coords) const;
  Element encode(const ZVector& v) const;
  ZVector decode(Element e) const;
  Element mul(Element a, Element b) const;
  Element inv(Element a) const;
  FiniteGroup group() const;

 private:
  LatticeGroupPtr delta_;
  std::int64_t s_;
  std::size_t k_;
  std::size_t order_;
};

}  // namespace nilcsp
