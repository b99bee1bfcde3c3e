#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "nilcsp/catalog.hpp"

namespace nilcsp {

using Json = nlohmann::json;

// Interchange documents. Rationals are written as "num/den" strings (or
// "num" when integral); readers also accept JSON integers. Readers throw
// InvalidInput naming the offending JSON location.

Json to_json(const Rational& q);
Json to_json(const Integer& z);
Rational rational_from_json(const Json& j, const std::string& where);
Integer integer_from_json(const Json& j, const std::string& where);

// { "dim": k, "den": D, "rows": [[int,...],...] } with rows/D in HNF
Json lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const Json& j);

// { "dim": k, "class": c, "brackets": [[i, j, [q,...]], ...] }
Json algebra_to_json(const LieAlgebra& L);
LieAlgebra algebra_from_json(const Json& j);

// { "algebra": ..., "generators": [[q,...],...], "filtered": bool }
Json group_to_json(const GenGroup& g);
GenGroup group_from_json(const Json& j);

// { "k": k, "matrix": [["num/den",...],...] }
Json automorphism_to_json(const QMatrix& A);
QMatrix automorphism_from_json(const Json& j);

// { "order": N, "cayley": [[...],...] }
Json finite_group_to_json(const FiniteGroup& g);
FiniteGroup finite_group_from_json(const Json& j);

// { "p1": group, "p2": finite group, "q": finite group,
//   "pi1": { "images": [...] }, "pi2": { "generators": [...], "images": [...] } }
// Each part may instead be a path to a file holding it, relative to base_dir.
// P1 is the lattice hull of the given group; pi1 images are for its adapted basis.
FiberGroup fiber_from_json(const Json& j, const std::filesystem::path& base_dir = ".");
Json fiber_to_json(const FiberGroup& u);

// { "entries": [ { "name", "recipe", "witt_layers",
//   "expected": { "hull_index": { "value", "provenance" }, ... } } ] }
// Entries whose recipe is "fiber <path>" describe fiber products instead, with
// expected values "t" and "torsion"; catalog_from_json skips them.
Json catalog_to_json(const std::vector<CatalogEntry>& entries);
std::vector<CatalogEntry> catalog_from_json(const Json& j);
Json fiber_entry_to_json(const TorsionEntry& e, const std::string& fiber_path);
std::vector<TorsionEntry> fiber_entries_from_json(const Json& j, const std::filesystem::path& base_dir = ".");

Json load_json_file(const std::filesystem::path& path);

Json vector_to_json(const QVector& v);
QVector vector_from_json(const Json& j, std::size_t dim, const std::string& where);
Json matrix_to_json(const ZMatrix& m);
Json matrix_to_json(const QMatrix& m);

}  // namespace nilcsp
