#include "nilcsp/lattice.hpp"

#include "nilcsp/normal_forms.hpp"

namespace nilcsp {

Lattice Lattice::from_numerators(std::size_t dim, const Integer& den, const ZMatrix& rows) {
  if (den <= 0) throw InvalidInput("lattice denominator must be positive");
  if (rows.rows() > 0 && rows.cols() != dim)
    throw DimensionMismatch("lattice rows have " + std::to_string(rows.cols()) +
                            " columns, expected " + std::to_string(dim));
  Lattice l;
  l.dim_ = dim;
  ZMatrix h = rows.rows() ? hermite_basis(rows) : ZMatrix(0, dim);
  Integer g = den;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < dim; ++j) g = gcd(g, h(i, j));
  if (h.rows() == 0) g = den;
  l.den_ = den / g;
  if (g != 1)
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < dim; ++j) h(i, j) /= g;
  // dividing by the content keeps HNF shape; rerun to be safe about residues
  l.num_ = h.rows() ? hermite_basis(h) : ZMatrix(0, dim);
  return l;
}

Lattice Lattice::span(std::size_t dim, const std::vector<QVector>& rows) {
  Integer den = 1;
  for (const auto& r : rows) {
    if (r.size() != dim) throw DimensionMismatch("lattice generator has wrong length");
    den = lcm(den, lcm_of_denominators(r));
  }
  ZMatrix m(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      Rational x = rows[i][j] * den;
      m(i, j) = x.get_num();
    }
  return from_numerators(dim, den, m);
}

Lattice Lattice::span_integer(std::size_t dim, const ZMatrix& rows) {
  return from_numerators(dim, 1, rows);
}

Lattice Lattice::standard(std::size_t dim) { return from_numerators(dim, 1, ZMatrix::identity(dim)); }

Lattice Lattice::zero(std::size_t dim) { return from_numerators(dim, 1, ZMatrix(0, dim)); }

QVector Lattice::basis_vector(std::size_t i) const {
  QVector v(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    v[j] = Rational(num_(i, j), den_);
    v[j].canonicalize();
  }
  return v;
}

std::vector<QVector> Lattice::basis() const {
  std::vector<QVector> out;
  for (std::size_t i = 0; i < rank(); ++i) out.push_back(basis_vector(i));
  return out;
}

QMatrix Lattice::basis_matrix() const {
  QMatrix m(rank(), dim_);
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      m(i, j) = Rational(num_(i, j), den_);
      m(i, j).canonicalize();
    }
  return m;
}

std::optional<ZVector> Lattice::coordinates(const QVector& v) const {
  if (v.size() != dim_) throw DimensionMismatch("vector length does not match lattice");
  // reduce den*v against the echelon rows
  std::vector<Rational> w(dim_);
  for (std::size_t j = 0; j < dim_; ++j) w[j] = v[j] * den_;
  for (const auto& x : w)
    if (x.get_den() != 1) return std::nullopt;
  ZVector rem(dim_);
  for (std::size_t j = 0; j < dim_; ++j) rem[j] = w[j].get_num();
  ZVector coeff(rank());
  std::size_t col = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    while (num_(i, col) == 0) {
      if (rem[col] != 0) return std::nullopt;
      ++col;
    }
    if (rem[col] % num_(i, col) != 0) return std::nullopt;
    Integer q = rem[col] / num_(i, col);
    coeff[i] = q;
    if (q != 0)
      for (std::size_t j = col; j < dim_; ++j) rem[j] -= q * num_(i, j);
    ++col;
  }
  for (std::size_t j = 0; j < dim_; ++j)
    if (rem[j] != 0) return std::nullopt;
  return coeff;
}

bool Lattice::contains(const QVector& v) const { return coordinates(v).has_value(); }

Lattice Lattice::scaled(const Rational& c) const {
  if (c == 0) return zero(dim_);
  Integer den = den_ * c.get_den();
  ZMatrix m = num_;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < dim_; ++j) m(i, j) *= c.get_num();
  return from_numerators(dim_, den, m);
}

namespace {

void require_same_dim(const Lattice& a, const Lattice& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("lattices live in dimensions " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
}

// numerators of a over a common denominator den
ZMatrix rescale(const Lattice& a, const Integer& den) {
  ZMatrix m = a.numerators();
  Integer f = den / a.denominator();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= f;
  return m;
}

}  // namespace

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  require_same_dim(a, b);
  Integer den = lcm(a.denominator(), b.denominator());
  ZMatrix m = rescale(a, den);
  ZMatrix mb = rescale(b, den);
  for (std::size_t i = 0; i < mb.rows(); ++i) m.append_row(mb.row_vector(i));
  if (m.rows() == 0) return Lattice::zero(a.dim());
  return Lattice::from_numerators(a.dim(), den, m);
}

Lattice lattice_intersection(const Lattice& a, const Lattice& b) {
  require_same_dim(a, b);
  if (a.rank() == 0 || b.rank() == 0) return Lattice::zero(a.dim());
  // x A == y B  <=>  (x, -y) [A; B] == 0 ; the intersection is spanned by x A.
  Integer den = lcm(a.denominator(), b.denominator());
  ZMatrix A = rescale(a, den), B = rescale(b, den);
  ZMatrix stacked = A;
  for (std::size_t i = 0; i < B.rows(); ++i) stacked.append_row(B.row_vector(i));
  ZMatrix ker = integer_left_kernel(stacked);
  ZMatrix rows(ker.rows(), a.dim());
  for (std::size_t r = 0; r < ker.rows(); ++r)
    for (std::size_t i = 0; i < A.rows(); ++i) {
      if (ker(r, i) == 0) continue;
      for (std::size_t j = 0; j < a.dim(); ++j) rows(r, j) += ker(r, i) * A(i, j);
    }
  if (rows.rows() == 0) return Lattice::zero(a.dim());
  return Lattice::from_numerators(a.dim(), den, rows);
}

bool is_sublattice(const Lattice& inner, const Lattice& outer) {
  require_same_dim(inner, outer);
  for (std::size_t i = 0; i < inner.rank(); ++i)
    if (!outer.contains(inner.basis_vector(i))) return false;
  return true;
}

static ZMatrix inner_coordinates(const Lattice& outer, const Lattice& inner) {
  require_same_dim(outer, inner);
  if (outer.rank() != inner.rank())
    throw InvalidInput("index of lattices of ranks " + std::to_string(outer.rank()) + " and " +
                       std::to_string(inner.rank()) + " is infinite");
  ZMatrix c(inner.rank(), outer.rank());
  for (std::size_t i = 0; i < inner.rank(); ++i) {
    auto co = outer.coordinates(inner.basis_vector(i));
    if (!co) throw InvalidInput("lattice is not a sublattice");
    for (std::size_t j = 0; j < outer.rank(); ++j) c(i, j) = (*co)[j];
  }
  return c;
}

Integer lattice_index(const Lattice& outer, const Lattice& inner) {
  ZMatrix c = inner_coordinates(outer, inner);
  if (c.rows() == 0) return 1;
  return abs(integer_determinant(c));
}

std::vector<Integer> quotient_invariants(const Lattice& outer, const Lattice& inner) {
  ZMatrix c = inner_coordinates(outer, inner);
  std::vector<Integer> out;
  if (c.rows() == 0) return out;
  for (const auto& d : smith_form(c).diagonal)
    if (d != 1) out.push_back(d);
  return out;
}

Lattice intersect_subspace(const Lattice& lat, const std::vector<QVector>& subspace) {
  if (lat.rank() == 0) return lat;
  // annihilator W of the subspace: v lies in the span iff v W == 0
  const std::size_t k = lat.dim();
  QMatrix s(0, k);
  for (const auto& v : subspace) s.append_row(v);
  std::vector<QVector> ann;
  if (s.rows() == 0) {
    for (std::size_t i = 0; i < k; ++i) ann.push_back(unit_vector(k, i));
  } else {
    ann = left_nullspace(s.transpose());  // w with s w^T == 0
  }
  if (ann.empty()) return lat;
  // integer combinations x of the lattice basis with (x H) W == 0
  QMatrix hw(lat.rank(), ann.size());
  QMatrix basis = lat.basis_matrix();
  for (std::size_t i = 0; i < lat.rank(); ++i)
    for (std::size_t a = 0; a < ann.size(); ++a) {
      Rational acc = 0;
      for (std::size_t j = 0; j < k; ++j) acc += basis(i, j) * ann[a][j];
      hw(i, a) = acc;
    }
  Integer den = 1;
  for (std::size_t i = 0; i < hw.rows(); ++i)
    for (std::size_t j = 0; j < hw.cols(); ++j) den = lcm(den, Integer(hw(i, j).get_den()));
  ZMatrix hz(hw.rows(), hw.cols());
  for (std::size_t i = 0; i < hw.rows(); ++i)
    for (std::size_t j = 0; j < hw.cols(); ++j) hz(i, j) = Rational(hw(i, j) * den).get_num();
  ZMatrix ker = integer_left_kernel(hz);
  std::vector<QVector> rows;
  for (std::size_t r = 0; r < ker.rows(); ++r) {
    QVector v = zero_vector(k);
    for (std::size_t i = 0; i < lat.rank(); ++i)
      if (ker(r, i) != 0) axpy(v, Rational(ker(r, i)), lat.basis_vector(i));
    rows.push_back(std::move(v));
  }
  return Lattice::span(k, rows);
}

}  // namespace nilcsp
