#include "nilcsp/matrix.hpp"

namespace nilcsp {

QMatrix to_rational(const ZMatrix& m) {
  QMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

ZMatrix to_integer(const QMatrix& m) {
  ZMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1)
        throw InvalidInput("non-integral matrix entry " + to_string(m(i, j)));
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

bool is_integral(const QMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j).get_den() != 1) return false;
  return true;
}

QMatrix rref(QMatrix m, std::vector<std::size_t>* pivots) {
  std::size_t r = 0;
  if (pivots) pivots->clear();
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    if (pivots) pivots->push_back(c);
    ++r;
  }
  return m;
}

std::size_t rank(const QMatrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  return piv.size();
}

std::vector<QVector> row_space_basis(const std::vector<QVector>& rows, std::size_t dim) {
  QMatrix m(0, dim);
  for (const auto& v : rows) m.append_row(v);
  if (rows.empty()) return {};
  std::vector<std::size_t> piv;
  QMatrix e = rref(m, &piv);
  std::vector<QVector> out;
  for (std::size_t i = 0; i < piv.size(); ++i) out.push_back(e.row_vector(i));
  return out;
}

std::vector<QVector> left_nullspace(const QMatrix& m) {
  // v m = 0  <=>  m^T v^T = 0; read the null space off the rref of m^T.
  QMatrix t = m.transpose();
  std::vector<std::size_t> piv;
  QMatrix e = rref(t, &piv);
  std::vector<bool> is_pivot(t.cols(), false);
  for (auto p : piv) is_pivot[p] = true;
  std::vector<QVector> out;
  for (std::size_t f = 0; f < t.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVector v = zero_vector(t.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -e(i, f);
    out.push_back(std::move(v));
  }
  return out;
}

Rational determinant(const QMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of " + a.shape());
  const std::size_t n = a.rows();
  bool upper = true;
  for (std::size_t i = 1; i < n && upper; ++i)
    for (std::size_t j = 0; j < i && upper; ++j) upper = a(i, j) == 0;
  if (upper) {
    Rational det = 1;
    for (std::size_t i = 0; i < n; ++i) det *= a(i, i);
    return det;
  }
  QMatrix m = a;
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

QMatrix inverse(const QMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse of " + a.shape());
  const std::size_t n = a.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  std::vector<std::size_t> piv;
  QMatrix e = rref(aug, &piv);
  if (piv.size() < n || piv[n - 1] != n - 1) throw InvalidInput("singular matrix");
  return e.block(0, n, n, n);
}

std::optional<QVector> solve_left(const QMatrix& m, const QVector& v) {
  if (v.size() != m.cols()) throw DimensionMismatch("solve_left: right-hand side length");
  // x m = v  <=>  m^T x^T = v^T
  QMatrix aug(m.cols(), m.rows() + 1);
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = 0; j < m.rows(); ++j) aug(i, j) = m(j, i);
    aug(i, m.rows()) = v[i];
  }
  std::vector<std::size_t> piv;
  QMatrix e = rref(aug, &piv);
  if (!piv.empty() && piv.back() == m.rows()) return std::nullopt;
  QVector x = zero_vector(m.rows());
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = e(i, m.rows());
  return x;
}

}  // namespace nilcsp
