#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilcsp/rational.hpp"

namespace nilcsp {

// Dense row-major matrix. Rows are the natural unit everywhere in this
// library: lattices are row spans and linear maps act on row vectors.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw DimensionMismatch("row " + std::to_string(i) + " has length " +
                                std::to_string(rows[i].size()) + ", expected " +
                                std::to_string(cols));
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<T> row_vector(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<std::vector<T>> to_rows() const {
    std::vector<std::vector<T>> r;
    for (std::size_t i = 0; i < rows_; ++i) r.push_back(row_vector(i));
    return r;
  }

  void append_row(const std::vector<T>& v) {
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw DimensionMismatch("appended row has wrong length");
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionMismatch("matrix product " + a.shape() + " * " + b.shape());
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const T& x = a(i, l);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(l, j);
      }
    return c;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.require_same(b);
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.require_same(b);
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
  }

  Matrix scaled(const T& s) const {
    Matrix c = *this;
    for (auto& x : c.data_) x *= s;
    return c;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_same(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
      throw DimensionMismatch("matrix shapes " + shape() + " and " + b.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using QMatrix = Matrix<Rational>;
using ZMatrix = Matrix<Integer>;

// Row vector times matrix.
template <class T>
std::vector<T> row_times(const std::vector<T>& v, const Matrix<T>& m) {
  if (v.size() != m.rows())
    throw DimensionMismatch("row vector of length " + std::to_string(v.size()) + " times " +
                            m.shape());
  std::vector<T> r(m.cols(), T(0));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) r[j] += v[i] * m(i, j);
  }
  return r;
}

QMatrix to_rational(const ZMatrix& m);
// Throws InvalidInput on a non-integral entry.
ZMatrix to_integer(const QMatrix& m);
bool is_integral(const QMatrix& m);

// ---- rational linear algebra ----

// Reduced row echelon form; pivot columns are written to *pivots when given.
QMatrix rref(QMatrix m, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const QMatrix& m);
// Basis (rref rows) of the row space of the given vectors.
std::vector<QVector> row_space_basis(const std::vector<QVector>& rows, std::size_t dim);
// Vectors v with v * m == 0.
std::vector<QVector> left_nullspace(const QMatrix& m);
Rational determinant(const QMatrix& m);
// Throws InvalidInput if singular.
QMatrix inverse(const QMatrix& m);
// Some x with x * m == v, if one exists.
std::optional<QVector> solve_left(const QMatrix& m, const QVector& v);

}  // namespace nilcsp
