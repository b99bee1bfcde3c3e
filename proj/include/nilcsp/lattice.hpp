#pragma once

#include <optional>

#include "nilcsp/matrix.hpp"

namespace nilcsp {

// A full-or-partial rank Z-lattice in Q^k, stored canonically as
// (1/den) * rowspan(rows) with rows in Hermite normal form and den minimal.
// Two lattices are equal iff their (den, rows) pairs are equal.
class Lattice {
 public:
  Lattice() = default;

  // Z-span of the given rational vectors (zero rows allowed).
  static Lattice span(std::size_t dim, const std::vector<QVector>& rows);
  static Lattice span_integer(std::size_t dim, const ZMatrix& rows);
  static Lattice standard(std::size_t dim);
  static Lattice zero(std::size_t dim);
  // Accepts any (den, rows) and canonicalizes.
  static Lattice from_numerators(std::size_t dim, const Integer& den, const ZMatrix& rows);

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return num_.rows(); }
  bool full_rank() const { return rank() == dim_; }
  const Integer& denominator() const { return den_; }
  const ZMatrix& numerators() const { return num_; }

  QVector basis_vector(std::size_t i) const;
  std::vector<QVector> basis() const;
  QMatrix basis_matrix() const;

  bool contains(const QVector& v) const;
  // Integer coefficients of v in the stored basis, if v lies in the lattice.
  std::optional<ZVector> coordinates(const QVector& v) const;

  Lattice scaled(const Rational& c) const;

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.dim_ == b.dim_ && a.den_ == b.den_ && a.num_ == b.num_;
  }

 private:
  std::size_t dim_ = 0;
  Integer den_ = 1;
  ZMatrix num_;
};

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_intersection(const Lattice& a, const Lattice& b);
bool is_sublattice(const Lattice& inner, const Lattice& outer);
// [outer : inner]; both must have the same rank and inner must sit in outer.
Integer lattice_index(const Lattice& outer, const Lattice& inner);
// Invariant factors of outer/inner (only the nontrivial ones), same preconditions.
std::vector<Integer> quotient_invariants(const Lattice& outer, const Lattice& inner);
// lattice intersected with the Q-span of the given vectors
Lattice intersect_subspace(const Lattice& lat, const std::vector<QVector>& subspace);

}  // namespace nilcsp
