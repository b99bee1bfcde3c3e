#pragma once

#include <optional>
#include <string>

#include "nilcsp/fiber.hpp"

namespace nilcsp {

// Expected values are assertions checked against fresh computations.
struct Expected {
  std::string value;
  std::string provenance;  // "trivial" or "derived"
};

struct CatalogEntry {
  std::string name;
  std::string recipe;  // "abelian n", "heisenberg", "free n c", "free-hull n c"
  GenGroup group;
  std::vector<std::size_t> witt_layers;  // expected layer ranks (empty: no oracle)
  std::optional<Expected> hull_index, d, k, ia_rank;
};

// Builds a generating set from a recipe string; throws InvalidInput otherwise.
GenGroup group_from_recipe(const std::string& recipe);
std::vector<CatalogEntry> default_catalog();

LatticeGroupPtr make_hull(const GenGroup& g);
LatticeGroupPtr heisenberg_hull_group();
LatticeGroupPtr integer_group(std::size_t n);  // Z^n

struct TorsionEntry {
  std::string name;
  std::shared_ptr<const FiberGroup> group;
  std::int64_t expected_t;
  std::size_t expected_torsion;
};
std::vector<TorsionEntry> torsion_catalog();

// A deterministic sample of integral Lie automorphisms of a hull group
// (adapted coordinates): signed first-layer permutations and shears that
// extend to automorphisms, plus a few IA* elements.
std::vector<ZMatrix> sample_automorphisms(const LatticeGroup& delta, std::size_t max_count = 12);

}  // namespace nilcsp
