#pragma once

#include <cstdint>

#include "nilcsp/lie.hpp"

namespace nilcsp {

// Coefficient vectors of the binomial expansion of a polynomial vector map
// (no parameter variables). The Z-span of the vectors equals the Z-span of
// the map's values on integer points.
std::vector<QVector> binomial_coefficient_vectors(const std::vector<Polynomial>& map);

// bch(sum X_i u_i, sum Y_i u_i) as polynomials in 2r variables (X then Y),
// written in ambient coordinates.
std::vector<Polynomial> bch_polynomial(const LieAlgebra& L, const std::vector<QVector>& basis);

// The group law of exp(Lambda) in the coordinates of a lattice basis in
// which it is integer valued. Exact multiplication uses GMP; the modular
// path evaluates Q_l / N_l with all arithmetic mod s * N_l.
class CompiledLaw {
 public:
  // `algebra` must already be written in the lattice basis
  explicit CompiledLaw(const LieAlgebra& algebra);

  std::size_t dim() const { return dim_; }
  const std::vector<Polynomial>& polynomials() const { return polys_; }
  bool integer_valued() const { return integer_valued_; }

  ZVector multiply(const ZVector& x, const ZVector& y) const;
  // out = x * y reduced mod s (entries of x, y must be in [0, s))
  void multiply_mod(const std::int64_t* x, const std::int64_t* y, std::int64_t s,
                    std::int64_t* out) const;

 private:
  struct Term {
    Integer coeff;
    std::int64_t coeff64;
    std::vector<std::pair<std::uint8_t, std::uint8_t>> factors;  // (variable, exponent)
  };
  struct Coordinate {
    Integer den;
    std::int64_t den64;
    std::vector<Term> terms;
  };
  std::size_t dim_;
  std::vector<Polynomial> polys_;
  std::vector<Coordinate> coords_;
  bool integer_valued_ = false;
};

}  // namespace nilcsp
