#pragma once

#include "nilcsp/matrix.hpp"

namespace nilcsp {

// Row Hermite normal form with transform: U * M == H, U unimodular.
// Rows [0, rank) of H are the nonzero HNF rows: pivots strictly increase,
// are positive, and entries above a pivot lie in [0, pivot). Rows
// [rank, n) of H are zero, so the matching rows of U span the left kernel.
struct HermiteForm {
  ZMatrix H;
  ZMatrix U;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

HermiteForm hermite_form(const ZMatrix& m, bool with_transform = true);

// Nonzero HNF rows only.
ZMatrix hermite_basis(const ZMatrix& m);

// Smith form with transforms: U * M * V == diag(d_0, ..., d_{r-1}, 0, ...),
// d_i > 0 and d_i | d_{i+1}.
struct SmithForm {
  ZMatrix U;
  ZMatrix V;
  std::vector<Integer> diagonal;  // the r nonzero invariant factors
  std::size_t rank() const { return diagonal.size(); }
};

SmithForm smith_form(const ZMatrix& m);

// HNF basis of {v integer : v * M == 0}.
ZMatrix integer_left_kernel(const ZMatrix& m);

Integer integer_determinant(const ZMatrix& m);

// Inverse of a unimodular matrix; throws InvalidInput otherwise.
ZMatrix unimodular_inverse(const ZMatrix& m);

}  // namespace nilcsp
