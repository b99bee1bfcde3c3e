#pragma once

#include <memory>
#include <optional>

#include "nilcsp/group_law.hpp"
#include "nilcsp/lattice.hpp"

namespace nilcsp {

// A finitely generated subgroup of the Mal'cev completion exp(L), given
// by the logs of its generators. `filtered` asserts that the generators are
// a Mal'cev basis adapted to the lower central series, which is what the
// layer-by-layer index computation needs.
struct GenGroup {
  AlgebraPtr algebra;
  std::vector<QVector> generators;
  bool filtered = false;
};

struct HullOptions {
  std::size_t max_rounds = 64;
};

// exp(Lambda) for a BCH-closed full-rank lattice Lambda, together with an
// adapted basis: the basis is split into layers, and the elements of layer
// j and below span Lambda intersected with the j-th lower central term.
class LatticeGroup {
 public:
  // Throws InvalidInput if the lattice is not full rank or not BCH-closed.
  LatticeGroup(AlgebraPtr algebra, Lattice lattice);

  const AlgebraPtr& algebra() const { return algebra_; }
  const Lattice& lattice() const { return lattice_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<QVector>& basis() const { return basis_; }
  const std::vector<std::size_t>& layer_sizes() const { return layer_sizes_; }
  std::size_t layer_of(std::size_t i) const { return layer_[i]; }  // 1-based
  std::size_t layer_begin(std::size_t layer) const;                // 1-based layer
  std::size_t abelian_rank() const { return layer_sizes_.empty() ? 0 : layer_sizes_[0]; }
  unsigned nilpotency_class() const { return static_cast<unsigned>(layer_sizes_.size()); }

  // structure constants and group law in the adapted basis (both integral)
  const AlgebraPtr& basis_algebra() const { return basis_algebra_; }
  const CompiledLaw& law() const { return *law_; }

  QVector to_basis(const QVector& ambient) const;
  QVector from_basis(const QVector& coords) const;
  std::optional<ZVector> basis_coordinates(const QVector& ambient) const;

  // Mal'cev (second kind) coordinates: exp(x) = prod_i exp(e_i b_i).
  ZVector second_kind(const ZVector& x) const;
  ZVector from_second_kind(const ZVector& e) const;

  // Rounds used by lattice_hull (0 when constructed directly).
  std::size_t rounds = 0;
  // When the generators did not span the algebra, the algebra above is
  // their Lie span and these rows embed it in the caller's coordinates.
  std::optional<QMatrix> embedding;

 private:
  AlgebraPtr algebra_;
  Lattice lattice_;
  std::vector<QVector> basis_;
  std::vector<std::size_t> layer_sizes_;
  std::vector<std::size_t> layer_;
  QMatrix P_, Pinv_;
  AlgebraPtr basis_algebra_;
  std::shared_ptr<const CompiledLaw> law_;
};

using LatticeGroupPtr = std::shared_ptr<const LatticeGroup>;

// Defect of BCH-closure: binomial coefficient vectors of the BCH polynomial
// written in a basis of the lattice. The lattice is closed iff all of them
// lie in it.
std::vector<QVector> bch_closure_vectors(const LieAlgebra& L, const Lattice& lattice);
bool is_bch_closed(const LieAlgebra& L, const Lattice& lattice);

// Smallest BCH-closed lattice containing the generators, with its adapted basis.
LatticeGroup lattice_hull(const GenGroup& g, const HullOptions& opts = {});

// Adapted basis of a full-rank lattice with respect to the lower central
// series of L, grouped by layer.
std::vector<std::vector<QVector>> adapted_basis(const LieAlgebra& L, const Lattice& lattice);

struct DeltaData {
  std::size_t d = 0;   // rank of the abelianization mod torsion
  Lattice derived;     // Lambda intersected with [L, L]
};
DeltaData delta_data(const LatticeGroup& delta);

// [hull : Gamma] computed layer by layer; requires g.filtered.
Integer hull_index(const GenGroup& g, const LatticeGroup& delta);

GroupElement root(const GroupElement& g, const Integer& m);

// Level s = m * D at which s*Lambda is a normal subgroup with cosets
// x + s*Lambda, so that Lambda / s*Lambda carries the quotient law.
struct CongruenceLevel {
  Integer m;
  Integer D;
  Integer scale;  // m * D
};
bool is_congruence_scale(const LatticeGroup& delta, const Integer& s);
CongruenceLevel congruence_level(const LatticeGroup& delta, const Integer& m,
                                 unsigned max_power = 6);

}  // namespace nilcsp
