#include "nilcsp/normal_forms.hpp"

#include <utility>

namespace nilcsp {

namespace {

// rows (a, b) <- (s a + t b, u a + v b), applied to both M and, if present, U.
void combine_rows(ZMatrix& m, std::size_t a, std::size_t b, const Integer& s,
                  const Integer& t, const Integer& u, const Integer& v) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Integer x = m(a, j), y = m(b, j);
    m(a, j) = s * x + t * y;
    m(b, j) = u * x + v * y;
  }
}

void add_row_multiple(ZMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  if (f == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (m(src, j) != 0) m(dst, j) += f * m(src, j);
}

void negate_row(ZMatrix& m, std::size_t r) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

void combine_cols(ZMatrix& m, std::size_t a, std::size_t b, const Integer& s,
                  const Integer& t, const Integer& u, const Integer& v) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer x = m(i, a), y = m(i, b);
    m(i, a) = s * x + t * y;
    m(i, b) = u * x + v * y;
  }
}

void add_col_multiple(ZMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  if (f == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (m(i, src) != 0) m(i, dst) += f * m(i, src);
}

}  // namespace

HermiteForm hermite_form(const ZMatrix& m, bool with_transform) {
  HermiteForm out;
  out.H = m;
  ZMatrix& H = out.H;
  const std::size_t n = H.rows();
  if (with_transform) out.U = ZMatrix::identity(n);
  ZMatrix& U = out.U;
  std::size_t r = 0;
  for (std::size_t c = 0; c < H.cols() && r < n; ++c) {
    // fold every row below r into row r with extended gcd steps
    for (std::size_t i = r + 1; i < n; ++i) {
      if (H(i, c) == 0) continue;
      if (H(r, c) == 0) {
        H.swap_rows(r, i);
        if (with_transform) U.swap_rows(r, i);
        continue;
      }
      Integer a = H(r, c), b = H(i, c), g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Integer u = -b / g, v = a / g;
      combine_rows(H, r, i, s, t, u, v);
      if (with_transform) combine_rows(U, r, i, s, t, u, v);
    }
    if (H(r, c) == 0) continue;
    if (H(r, c) < 0) {
      negate_row(H, r);
      if (with_transform) negate_row(U, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(H(i, c), H(r, c));
      if (q == 0) continue;
      add_row_multiple(H, i, r, -q);
      if (with_transform) add_row_multiple(U, i, r, -q);
    }
    out.pivots.push_back(c);
    ++r;
  }
  return out;
}

ZMatrix hermite_basis(const ZMatrix& m) {
  HermiteForm h = hermite_form(m, false);
  return h.H.block(0, 0, h.rank(), m.cols());
}

SmithForm smith_form(const ZMatrix& m) {
  ZMatrix A = m;
  const std::size_t R = A.rows(), C = A.cols();
  ZMatrix U = ZMatrix::identity(R), V = ZMatrix::identity(C);
  std::size_t t = 0;
  for (; t < std::min(R, C); ++t) {
    // pick the smallest nonzero entry of the trailing block as pivot
    bool found = false;
    std::size_t pi = t, pj = t;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (A(i, j) != 0 && (!found || abs(A(i, j)) < abs(A(pi, pj)))) {
          found = true;
          pi = i;
          pj = j;
        }
    if (!found) break;
    A.swap_rows(t, pi);
    U.swap_rows(t, pi);
    A.swap_cols(t, pj);
    V.swap_cols(t, pj);
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (A(i, t) == 0) continue;
        if (A(i, t) % A(t, t) == 0) {
          Integer q = A(i, t) / A(t, t);
          add_row_multiple(A, i, t, -q);
          add_row_multiple(U, i, t, -q);
          continue;
        }
        Integer a = A(t, t), b = A(i, t), g, s, x;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), x.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        Integer u = -b / g, v = a / g;
        combine_rows(A, t, i, s, x, u, v);
        combine_rows(U, t, i, s, x, u, v);
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (A(t, j) == 0) continue;
        if (A(t, j) % A(t, t) == 0) {
          Integer q = A(t, j) / A(t, t);
          add_col_multiple(A, j, t, -q);
          add_col_multiple(V, j, t, -q);
          continue;
        }
        Integer a = A(t, t), b = A(t, j), g, s, x;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), x.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        Integer u = -b / g, v = a / g;
        combine_cols(A, t, j, s, x, u, v);
        combine_cols(V, t, j, s, x, u, v);
      }
      for (std::size_t i = t + 1; i < R; ++i)
        if (A(i, t) != 0) dirty = true;
      if (dirty) continue;
      // divisibility: fold an offending row into the pivot row and redo
      std::size_t bad = R;
      for (std::size_t i = t + 1; i < R && bad == R; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (A(i, j) % A(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == R) break;
      add_row_multiple(A, t, bad, Integer(1));
      add_row_multiple(U, t, bad, Integer(1));
    }
    if (A(t, t) < 0) {
      negate_row(A, t);
      negate_row(U, t);
    }
  }
  SmithForm out;
  for (std::size_t i = 0; i < t; ++i) out.diagonal.push_back(A(i, i));
  out.U = std::move(U);
  out.V = std::move(V);
  return out;
}

ZMatrix integer_left_kernel(const ZMatrix& m) {
  HermiteForm h = hermite_form(m, true);
  ZMatrix k(0, m.rows());
  for (std::size_t i = h.rank(); i < m.rows(); ++i) k.append_row(h.U.row_vector(i));
  if (k.rows() == 0) return ZMatrix(0, m.rows());
  return hermite_basis(k);
}

Integer integer_determinant(const ZMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of " + m.shape());
  QMatrix q = to_rational(m);
  Rational d = determinant(q);
  return d.get_num();
}

ZMatrix unimodular_inverse(const ZMatrix& m) {
  QMatrix inv = inverse(to_rational(m));
  if (!is_integral(inv)) throw InvalidInput("matrix is not unimodular");
  return to_integer(inv);
}

}  // namespace nilcsp
