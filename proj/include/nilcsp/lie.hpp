#pragma once

#include <memory>
#include <optional>
#include <string>

#include "nilcsp/bch.hpp"
#include "nilcsp/matrix.hpp"
#include "nilcsp/polynomial.hpp"

namespace nilcsp {

struct Bracket {
  std::size_t i, j;  // i < j
  QVector value;     // [b_i, b_j]
};

// Finite-dimensional Lie algebra over Q given by structure constants
// [b_i, b_j] = sum_l c_{ij}^l b_l. The raw table constructor accepts any
// table so that validate_algebra can report what is wrong with it.
class LieAlgebra {
 public:
  LieAlgebra(std::size_t dim, unsigned declared_class, std::vector<QVector> table);
  static LieAlgebra from_brackets(std::size_t dim, unsigned declared_class,
                                  const std::vector<Bracket>& brackets);
  static LieAlgebra abelian(std::size_t n);
  // [b0, b1] = b2
  static LieAlgebra heisenberg();
  // strictly upper triangular n x n matrices, basis E_ij (i < j) in
  // lexicographic order
  static LieAlgebra strictly_upper(std::size_t n);

  std::size_t dim() const { return dim_; }
  unsigned declared_class() const { return class_; }
  const QVector& structure(std::size_t i, std::size_t j) const { return table_[i * dim_ + j]; }
  std::vector<Bracket> nonzero_brackets() const;

  QVector bracket(const QVector& x, const QVector& y) const;
  // Writes [x, y] into out (resized to dim); tmp is scratch.
  void bracket_into(const QVector& x, const QVector& y, QVector& out, Rational& tmp) const;
  std::vector<Polynomial> bracket(const std::vector<Polynomial>& x,
                                  const std::vector<Polynomial>& y) const;

  const BchSeries& bch_series() const { return *series_; }

  // Algebra in the basis given by the rows of P (invertible), i.e. the new
  // i-th basis vector is row i of P written in old coordinates.
  LieAlgebra change_basis(const QMatrix& P) const;
  // Subalgebra spanned by the given independent rows (must be closed).
  LieAlgebra restrict_to(const std::vector<QVector>& basis) const;

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
    return a.dim_ == b.dim_ && a.table_ == b.table_;
  }

 private:
  struct Entry {
    std::size_t i, j, l;
    Rational c;
  };
  std::size_t dim_;
  unsigned class_;
  std::vector<QVector> table_;
  std::vector<Entry> sparse_;
  std::shared_ptr<const BchSeries> series_;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

struct AlgebraReport {
  bool valid = true;
  unsigned computed_class = 0;  // 0 when not nilpotent or invalid
  std::vector<std::string> violations;
};

// Antisymmetry, Jacobi on all triples, nilpotency and the declared class.
AlgebraReport validate_algebra(const LieAlgebra& L);

// gamma_1 = L, gamma_{j+1} = [L, gamma_j]; each term as an rref basis.
// Stops at the first zero term (which is not included).
std::vector<std::vector<QVector>> lower_central_series(const LieAlgebra& L);

// Smallest subalgebra containing the vectors (rref basis).
std::vector<QVector> lie_span(const LieAlgebra& L, const std::vector<QVector>& gens);

QVector bch(const LieAlgebra& L, const QVector& x, const QVector& y);
// bch with polynomial coordinates (all in one ring)
std::vector<Polynomial> bch(const LieAlgebra& L, const std::vector<Polynomial>& x,
                            const std::vector<Polynomial>& y);

// Group element exp(x) of the Mal'cev completion, stored by its log.
struct GroupElement {
  AlgebraPtr algebra;
  QVector log;
};

GroupElement group_identity(const AlgebraPtr& L);
GroupElement group_mul(const GroupElement& g, const GroupElement& h);
GroupElement group_inv(const GroupElement& g);
GroupElement group_pow(const GroupElement& g, const Rational& e);
// g^{-1} h^{-1} g h
GroupElement group_commutator(const GroupElement& g, const GroupElement& h);

// exp / log of unipotent matrices, exact over Q.
QMatrix matrix_exp(const QMatrix& N);  // N must be nilpotent
QMatrix matrix_log(const QMatrix& U);  // U must be unipotent
bool is_nilpotent_matrix(const QMatrix& N);

// vector of E_ij coefficients (i < j, lexicographic) <-> matrix
QMatrix upper_from_coords(std::size_t n, const QVector& v);
QVector coords_from_upper(const QMatrix& m);

}  // namespace nilcsp
