#include "nilcsp/group_law.hpp"

namespace nilcsp {

std::vector<QVector> binomial_coefficient_vectors(const std::vector<Polynomial>& map) {
  const std::size_t k = map.size();
  if (k == 0) return {};
  const std::size_t n = map[0].nvars();
  std::map<Monomial, QVector> collected;
  for (std::size_t l = 0; l < k; ++l)
    for (const auto& [mono, coeff] : binomial_expansion(map[l], n)) {
      auto it = collected.try_emplace(mono, zero_vector(k)).first;
      it->second[l] = coeff.evaluate(QVector(n, Rational(0)));
    }
  std::vector<QVector> out;
  for (auto& [mono, v] : collected)
    if (!is_zero(v)) out.push_back(std::move(v));
  return out;
}

std::vector<Polynomial> bch_polynomial(const LieAlgebra& L, const std::vector<QVector>& basis) {
  const std::size_t k = L.dim(), r = basis.size();
  std::vector<Polynomial> X(k, Polynomial(2 * r)), Y(k, Polynomial(2 * r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (basis[i][l] == 0) continue;
      X[l] += Polynomial::variable(2 * r, i) * basis[i][l];
      Y[l] += Polynomial::variable(2 * r, r + i) * basis[i][l];
    }
  return bch(L, X, Y);
}

CompiledLaw::CompiledLaw(const LieAlgebra& algebra) : dim_(algebra.dim()) {
  std::vector<QVector> unit;
  for (std::size_t i = 0; i < dim_; ++i) unit.push_back(unit_vector(dim_, i));
  polys_ = bch_polynomial(algebra, unit);
  integer_valued_ = true;
  for (const auto& v : binomial_coefficient_vectors(polys_))
    if (!is_integral(v)) integer_valued_ = false;
  for (const auto& p : polys_) {
    Coordinate c;
    c.den = 1;
    for (const auto& [m, q] : p.terms()) c.den = lcm(c.den, Integer(q.get_den()));
    for (const auto& [m, q] : p.terms()) {
      Term t;
      t.coeff = Rational(q * c.den).get_num();
      t.coeff64 = to_i64(t.coeff);
      for (std::size_t v = 0; v < m.size(); ++v)
        if (m[v]) t.factors.emplace_back(static_cast<std::uint8_t>(v), m[v]);
      c.terms.push_back(std::move(t));
    }
    c.den64 = to_i64(c.den);
    coords_.push_back(std::move(c));
  }
}

ZVector CompiledLaw::multiply(const ZVector& x, const ZVector& y) const {
  if (!integer_valued_) throw InvalidInput("group law is not integer valued in this basis");
  if (x.size() != dim_ || y.size() != dim_) throw DimensionMismatch("multiply: length");
  ZVector out(dim_);
  for (std::size_t l = 0; l < dim_; ++l) {
    Integer acc = 0;
    for (const auto& t : coords_[l].terms) {
      Integer v = t.coeff;
      for (auto [var, e] : t.factors) {
        const Integer& b = var < dim_ ? x[var] : y[var - dim_];
        for (unsigned i = 0; i < e; ++i) v *= b;
      }
      acc += v;
    }
    out[l] = acc / coords_[l].den;
  }
  return out;
}

void CompiledLaw::multiply_mod(const std::int64_t* x, const std::int64_t* y, std::int64_t s,
                               std::int64_t* out) const {
  using i128 = __int128;
  for (std::size_t l = 0; l < dim_; ++l) {
    const Coordinate& c = coords_[l];
    const std::int64_t den = c.den64;
    const i128 M = static_cast<i128>(s) * den;
    i128 acc = 0;
    for (const auto& t : c.terms) {
      i128 v = t.coeff64 % M;
      if (v < 0) v += M;
      for (auto [var, e] : t.factors) {
        i128 b = var < dim_ ? x[var] : y[var - dim_];
        for (unsigned i = 0; i < e; ++i) v = (v * b) % M;
      }
      acc = (acc + v) % M;
    }
    out[l] = static_cast<std::int64_t>((acc / den) % s);
  }
}

}  // namespace nilcsp
