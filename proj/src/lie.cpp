#include "nilcsp/lie.hpp"

#include <algorithm>

namespace nilcsp {

LieAlgebra::LieAlgebra(std::size_t dim, unsigned declared_class, std::vector<QVector> table)
    : dim_(dim), class_(declared_class), table_(std::move(table)) {
  if (table_.size() != dim_ * dim_)
    throw DimensionMismatch("structure table needs " + std::to_string(dim_ * dim_) + " entries");
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      const QVector& v = table_[i * dim_ + j];
      if (v.size() != dim_) throw DimensionMismatch("structure vector has wrong length");
      for (std::size_t l = 0; l < dim_; ++l)
        if (v[l] != 0) sparse_.push_back({i, j, l, v[l]});
    }
  series_ = std::make_shared<const BchSeries>(std::max(1u, class_));
}

LieAlgebra LieAlgebra::from_brackets(std::size_t dim, unsigned declared_class,
                                     const std::vector<Bracket>& brackets) {
  std::vector<QVector> table(dim * dim, zero_vector(dim));
  for (const auto& b : brackets) {
    if (b.i >= dim || b.j >= dim || b.value.size() != dim)
      throw InvalidInput("bracket entry out of range");
    if (b.i >= b.j) throw InvalidInput("bracket entries must have i < j");
    table[b.i * dim + b.j] = b.value;
    table[b.j * dim + b.i] = scale(Rational(-1), b.value);
  }
  return LieAlgebra(dim, declared_class, std::move(table));
}

LieAlgebra LieAlgebra::abelian(std::size_t n) {
  return LieAlgebra(n, n == 0 ? 0 : 1, std::vector<QVector>(n * n, zero_vector(n)));
}

LieAlgebra LieAlgebra::heisenberg() { return from_brackets(3, 2, {{0, 1, {0, 0, 1}}}); }

LieAlgebra LieAlgebra::strictly_upper(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) idx.emplace_back(i, j);
  const std::size_t k = idx.size();
  auto pos = [&](std::size_t i, std::size_t j) {
    return static_cast<std::size_t>(std::find(idx.begin(), idx.end(), std::make_pair(i, j)) -
                                    idx.begin());
  };
  std::vector<Bracket> br;
  // [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = p + 1; q < k; ++q) {
      auto [a, b] = idx[p];
      auto [c, d] = idx[q];
      QVector v = zero_vector(k);
      if (b == c) v[pos(a, d)] += 1;
      if (d == a) v[pos(c, b)] -= 1;
      if (!is_zero(v)) br.push_back({p, q, v});
    }
  return from_brackets(k, n <= 1 ? 0 : static_cast<unsigned>(n - 1), br);
}

std::vector<Bracket> LieAlgebra::nonzero_brackets() const {
  std::vector<Bracket> out;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      if (!is_zero(structure(i, j))) out.push_back({i, j, structure(i, j)});
  return out;
}

QVector LieAlgebra::bracket(const QVector& x, const QVector& y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw DimensionMismatch("bracket arguments must have length " + std::to_string(dim_));
  QVector r = zero_vector(dim_);
  for (const auto& e : sparse_) {
    if (x[e.i] == 0 || y[e.j] == 0) continue;
    r[e.l] += e.c * x[e.i] * y[e.j];
  }
  return r;
}

void LieAlgebra::bracket_into(const QVector& x, const QVector& y, QVector& out, Rational& tmp) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw DimensionMismatch("bracket arguments must have length " + std::to_string(dim_));
  out.resize(dim_);
  for (auto& v : out) v = 0;
  for (const auto& e : sparse_) {
    if (x[e.i] == 0 || y[e.j] == 0) continue;
    tmp = e.c * x[e.i];
    tmp *= y[e.j];
    out[e.l] += tmp;
  }
}

std::vector<Polynomial> LieAlgebra::bracket(const std::vector<Polynomial>& x,
                                            const std::vector<Polynomial>& y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw DimensionMismatch("bracket arguments must have length " + std::to_string(dim_));
  std::size_t nv = dim_ ? x[0].nvars() : 0;
  std::vector<Polynomial> r(dim_, Polynomial(nv));
  // group entries by (i, j) so each product is formed once
  std::size_t a = 0;
  while (a < sparse_.size()) {
    std::size_t b = a;
    while (b < sparse_.size() && sparse_[b].i == sparse_[a].i && sparse_[b].j == sparse_[a].j) ++b;
    const auto& xi = x[sparse_[a].i];
    const auto& yj = y[sparse_[a].j];
    if (!xi.is_zero() && !yj.is_zero()) {
      Polynomial prod = xi * yj;
      for (std::size_t e = a; e < b; ++e) r[sparse_[e].l] += prod * sparse_[e].c;
    }
    a = b;
  }
  return r;
}

LieAlgebra LieAlgebra::change_basis(const QMatrix& P) const {
  if (P.rows() != dim_ || P.cols() != dim_) throw DimensionMismatch("change_basis: matrix shape");
  QMatrix Pinv = inverse(P);
  std::vector<QVector> table(dim_ * dim_, zero_vector(dim_));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (i != j) table[i * dim_ + j] = row_times(bracket(P.row_vector(i), P.row_vector(j)), Pinv);
  return LieAlgebra(dim_, class_, std::move(table));
}

LieAlgebra LieAlgebra::restrict_to(const std::vector<QVector>& basis) const {
  const std::size_t m = basis.size();
  QMatrix S(0, dim_);
  for (const auto& v : basis) S.append_row(v);
  std::vector<QVector> table(m * m, zero_vector(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      auto c = solve_left(S, bracket(basis[i], basis[j]));
      if (!c) throw InvalidInput("restrict_to: span is not a subalgebra");
      table[i * m + j] = *c;
    }
  LieAlgebra sub(m, class_, std::move(table));
  auto lcs = lower_central_series(sub);
  sub.class_ = static_cast<unsigned>(lcs.size());
  sub.series_ = std::make_shared<const BchSeries>(std::max(1u, sub.class_));
  return sub;
}

std::vector<std::vector<QVector>> lower_central_series(const LieAlgebra& L) {
  const std::size_t k = L.dim();
  std::vector<std::vector<QVector>> out;
  std::vector<QVector> cur;
  for (std::size_t i = 0; i < k; ++i) cur.push_back(unit_vector(k, i));
  while (!cur.empty()) {
    out.push_back(cur);
    std::vector<QVector> next;
    for (std::size_t i = 0; i < k; ++i)
      for (const auto& v : cur) {
        QVector w = L.bracket(unit_vector(k, i), v);
        if (!is_zero(w)) next.push_back(std::move(w));
      }
    next = row_space_basis(next, k);
    if (next.size() == cur.size()) break;  // not nilpotent: series is stuck
    cur = std::move(next);
  }
  return out;
}

AlgebraReport validate_algebra(const LieAlgebra& L) {
  AlgebraReport rep;
  const std::size_t k = L.dim();
  for (std::size_t i = 0; i < k; ++i) {
    if (!is_zero(L.structure(i, i)))
      rep.violations.push_back("[b" + std::to_string(i) + ", b" + std::to_string(i) + "] != 0");
    for (std::size_t j = i + 1; j < k; ++j)
      if (add(L.structure(i, j), L.structure(j, i)) != zero_vector(k))
        rep.violations.push_back("antisymmetry fails for pair (" + std::to_string(i) + ", " +
                                 std::to_string(j) + ")");
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t l = j + 1; l < k; ++l) {
        QVector bi = unit_vector(k, i), bj = unit_vector(k, j), bl = unit_vector(k, l);
        QVector s = L.bracket(bi, L.bracket(bj, bl));
        s = add(s, L.bracket(bj, L.bracket(bl, bi)));
        s = add(s, L.bracket(bl, L.bracket(bi, bj)));
        if (!is_zero(s))
          rep.violations.push_back("Jacobi identity fails for triple (" + std::to_string(i) +
                                   ", " + std::to_string(j) + ", " + std::to_string(l) + ")");
      }
  auto lcs = lower_central_series(L);
  // the series loop stops either at zero (nilpotent) or when stuck
  std::vector<QVector> tail;
  for (std::size_t i = 0; i < k && !lcs.empty(); ++i)
    for (const auto& v : lcs.back()) {
      QVector w = L.bracket(unit_vector(k, i), v);
      if (!is_zero(w)) tail.push_back(w);
    }
  const bool nilpotent = tail.empty();
  if (!nilpotent) {
    rep.violations.push_back("lower central series does not reach zero");
  } else {
    rep.computed_class = static_cast<unsigned>(lcs.size());
    if (rep.computed_class != L.declared_class())
      rep.violations.push_back("declared class " + std::to_string(L.declared_class()) +
                               " but lower central series has length " +
                               std::to_string(rep.computed_class));
  }
  rep.valid = rep.violations.empty();
  if (!rep.valid && !nilpotent) rep.computed_class = 0;
  return rep;
}

std::vector<QVector> lie_span(const LieAlgebra& L, const std::vector<QVector>& gens) {
  const std::size_t k = L.dim();
  std::vector<QVector> basis = row_space_basis(gens, k);
  for (;;) {
    std::vector<QVector> all = basis;
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = a + 1; b < basis.size(); ++b) {
        QVector w = L.bracket(basis[a], basis[b]);
        if (!is_zero(w)) all.push_back(std::move(w));
      }
    auto next = row_space_basis(all, k);
    if (next.size() == basis.size()) return next;
    basis = std::move(next);
  }
}

QVector bch(const LieAlgebra& L, const QVector& x, const QVector& y) {
  if (x.size() != L.dim() || y.size() != L.dim())
    throw DimensionMismatch("bch arguments must have length " + std::to_string(L.dim()));
  return L.bch_series().evaluate(
      x, y, [&](const QVector& a, const QVector& b) { return L.bracket(a, b); },
      [](const QVector& v) { return is_zero(v); },
      [](QVector& acc, const Rational& c, const QVector& v) { axpy(acc, c, v); });
}

std::vector<Polynomial> bch(const LieAlgebra& L, const std::vector<Polynomial>& x,
                            const std::vector<Polynomial>& y) {
  using PV = std::vector<Polynomial>;
  return L.bch_series().evaluate(
      x, y, [&](const PV& a, const PV& b) { return L.bracket(a, b); },
      [](const PV& v) {
        for (const auto& p : v)
          if (!p.is_zero()) return false;
        return true;
      },
      [](PV& acc, const Rational& c, const PV& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
          if (!v[i].is_zero()) acc[i] += v[i] * c;
      });
}

namespace {
void same_algebra(const GroupElement& g, const GroupElement& h) {
  if (!g.algebra || !h.algebra || !(g.algebra == h.algebra || *g.algebra == *h.algebra))
    throw InvalidInput("group elements belong to different algebras");
}
}  // namespace

GroupElement group_identity(const AlgebraPtr& L) { return {L, zero_vector(L->dim())}; }

GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
  same_algebra(g, h);
  return {g.algebra, bch(*g.algebra, g.log, h.log)};
}

GroupElement group_inv(const GroupElement& g) { return {g.algebra, scale(Rational(-1), g.log)}; }

GroupElement group_pow(const GroupElement& g, const Rational& e) {
  return {g.algebra, scale(e, g.log)};
}

GroupElement group_commutator(const GroupElement& g, const GroupElement& h) {
  return group_mul(group_mul(group_inv(g), group_inv(h)), group_mul(g, h));
}

bool is_nilpotent_matrix(const QMatrix& N) {
  if (N.rows() != N.cols()) return false;
  QMatrix p = N;
  for (std::size_t i = 1; i < N.rows(); ++i) p = p * N;
  for (std::size_t i = 0; i < N.rows(); ++i)
    for (std::size_t j = 0; j < N.cols(); ++j)
      if (p(i, j) != 0) return false;
  return true;
}

QMatrix matrix_exp(const QMatrix& N) {
  if (!is_nilpotent_matrix(N)) throw InvalidInput("matrix_exp: matrix is not nilpotent");
  const std::size_t n = N.rows();
  QMatrix result = QMatrix::identity(n), term = QMatrix::identity(n);
  for (std::size_t k = 1; k < n; ++k) {
    term = (term * N).scaled(Rational(1, k));
    result = result + term;
  }
  return result;
}

QMatrix matrix_log(const QMatrix& U) {
  if (U.rows() != U.cols()) throw DimensionMismatch("matrix_log of " + U.shape());
  const std::size_t n = U.rows();
  QMatrix N = U - QMatrix::identity(n);
  if (!is_nilpotent_matrix(N)) throw InvalidInput("matrix_log: matrix is not unipotent");
  QMatrix result(n, n), power = QMatrix::identity(n);
  for (std::size_t k = 1; k < n; ++k) {
    power = power * N;
    Rational c(k % 2 == 1 ? 1 : -1, k);
    result = result + power.scaled(c);
  }
  return result;
}

QMatrix upper_from_coords(std::size_t n, const QVector& v) {
  if (v.size() != n * (n - 1) / 2) throw DimensionMismatch("upper_from_coords: length");
  QMatrix m(n, n);
  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = v[p++];
  return m;
}

QVector coords_from_upper(const QMatrix& m) {
  QVector v;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

}  // namespace nilcsp
