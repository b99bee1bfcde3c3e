#include "nilcsp/hull.hpp"

#include "nilcsp/normal_forms.hpp"

namespace nilcsp {

std::vector<QVector> bch_closure_vectors(const LieAlgebra& L, const Lattice& lattice) {
  return binomial_coefficient_vectors(bch_polynomial(L, lattice.basis()));
}

bool is_bch_closed(const LieAlgebra& L, const Lattice& lattice) {
  for (const auto& v : bch_closure_vectors(L, lattice))
    if (!lattice.contains(v)) return false;
  return true;
}

namespace {

// Coordinates modulo the subspace with the given rref basis: zero the pivot
// columns. Two vectors agree modulo the subspace iff their images agree.
QVector reduce_mod_subspace(QVector v, const std::vector<QVector>& rref_rows) {
  for (const auto& r : rref_rows) {
    std::size_t p = 0;
    while (r[p] == 0) ++p;
    if (v[p] != 0) axpy(v, -v[p], r);
  }
  return v;
}

bool in_subspace(const QVector& v, const std::vector<QVector>& rref_rows) {
  return is_zero(reduce_mod_subspace(v, rref_rows));
}

ZMatrix integer_rows(const std::vector<QVector>& rows, std::size_t k) {
  Integer den = 1;
  for (const auto& r : rows) den = lcm(den, lcm_of_denominators(r));
  ZMatrix m(rows.size(), k);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = Rational(rows[i][j] * den).get_num();
  return m;
}

}  // namespace

std::vector<std::vector<QVector>> adapted_basis(const LieAlgebra& L, const Lattice& lattice) {
  const std::size_t k = L.dim();
  if (lattice.dim() != k) throw DimensionMismatch("adapted_basis: lattice dimension");
  if (!lattice.full_rank()) throw InvalidInput("adapted_basis: lattice is not full rank");
  auto lcs = lower_central_series(L);
  const std::size_t c = lcs.size();
  std::vector<Lattice> layers;
  for (std::size_t j = 0; j < c; ++j) layers.push_back(intersect_subspace(lattice, lcs[j]));
  std::vector<std::vector<QVector>> out;
  for (std::size_t j = 0; j < c; ++j) {
    std::vector<QVector> lj = layers[j].basis();
    if (j + 1 == c) {
      out.push_back(lj);
      continue;
    }
    std::vector<QVector> proj;
    for (const auto& v : lj) proj.push_back(reduce_mod_subspace(v, lcs[j + 1]));
    HermiteForm h = hermite_form(integer_rows(proj, k));
    std::vector<QVector> lifts;
    for (std::size_t i = 0; i < h.rank(); ++i) {
      QVector v = zero_vector(k);
      for (std::size_t a = 0; a < lj.size(); ++a)
        if (h.U(i, a) != 0) axpy(v, Rational(h.U(i, a)), lj[a]);
      lifts.push_back(std::move(v));
    }
    if (lifts.size() != lcs[j].size() - lcs[j + 1].size())
      throw InvalidInput("adapted_basis: layer rank mismatch");
    out.push_back(std::move(lifts));
  }
  return out;
}

LatticeGroup::LatticeGroup(AlgebraPtr algebra, Lattice lattice)
    : algebra_(std::move(algebra)), lattice_(std::move(lattice)) {
  const std::size_t k = algebra_->dim();
  if (lattice_.dim() != k) throw DimensionMismatch("lattice and algebra dimensions differ");
  if (!lattice_.full_rank()) throw InvalidInput("lattice is not full rank");
  if (!is_bch_closed(*algebra_, lattice_)) throw InvalidInput("lattice is not BCH-closed");
  auto layers = adapted_basis(*algebra_, lattice_);
  for (std::size_t j = 0; j < layers.size(); ++j) {
    layer_sizes_.push_back(layers[j].size());
    for (auto& v : layers[j]) {
      basis_.push_back(v);
      layer_.push_back(j + 1);
    }
  }
  P_ = QMatrix(0, k);
  for (const auto& v : basis_) P_.append_row(v);
  if (k == 0) P_ = QMatrix(0, 0);
  Pinv_ = k ? inverse(P_) : QMatrix(0, 0);
  auto ba = std::make_shared<LieAlgebra>(algebra_->change_basis(P_));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (!is_integral(ba->structure(i, j)))
        throw InvalidInput("structure constants are not integral in the adapted basis");
  basis_algebra_ = ba;
  law_ = std::make_shared<const CompiledLaw>(*ba);
  if (!law_->integer_valued()) throw InvalidInput("group law is not integer valued");
}

std::size_t LatticeGroup::layer_begin(std::size_t layer) const {
  std::size_t b = 0;
  for (std::size_t j = 1; j < layer; ++j) b += layer_sizes_.at(j - 1);
  return b;
}

QVector LatticeGroup::to_basis(const QVector& ambient) const { return row_times(ambient, Pinv_); }

QVector LatticeGroup::from_basis(const QVector& coords) const { return row_times(coords, P_); }

std::optional<ZVector> LatticeGroup::basis_coordinates(const QVector& ambient) const {
  QVector c = to_basis(ambient);
  if (!is_integral(c)) return std::nullopt;
  return to_integer(c);
}

ZVector LatticeGroup::second_kind(const ZVector& x) const {
  const std::size_t k = dim();
  ZVector cur = x, e(k);
  for (std::size_t i = 0; i < k; ++i) {
    e[i] = cur[i];
    if (e[i] == 0) continue;
    ZVector step(k, 0);
    step[i] = -e[i];
    cur = law_->multiply(step, cur);
  }
  return e;
}

ZVector LatticeGroup::from_second_kind(const ZVector& e) const {
  const std::size_t k = dim();
  ZVector cur(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (e[i] == 0) continue;
    ZVector step(k, 0);
    step[i] = e[i];
    cur = law_->multiply(cur, step);
  }
  return cur;
}

LatticeGroup lattice_hull(const GenGroup& g, const HullOptions& opts) {
  if (!g.algebra) throw InvalidInput("group has no algebra");
  const LieAlgebra& L0 = *g.algebra;
  const std::size_t k0 = L0.dim();
  for (const auto& v : g.generators)
    if (v.size() != k0) throw DimensionMismatch("generator length differs from algebra dimension");
  auto span = lie_span(L0, g.generators);
  AlgebraPtr L = g.algebra;
  std::vector<QVector> gens = g.generators;
  std::optional<QMatrix> embedding;
  if (span.size() < k0) {
    QMatrix S(0, k0);
    for (const auto& v : span) S.append_row(v);
    L = std::make_shared<const LieAlgebra>(L0.restrict_to(span));
    for (auto& v : gens) v = *solve_left(S, v);
    embedding = S;
  }
  const std::size_t k = L->dim();
  Lattice lat = Lattice::span(k, gens);
  std::size_t rounds = 0;
  for (;;) {
    if (++rounds > opts.max_rounds)
      throw CapExceeded("lattice_hull did not stabilize within " + std::to_string(opts.max_rounds) +
                        " rounds");
    std::vector<QVector> extra = lat.basis();
    auto basis = lat.basis();
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        if (i != j) extra.push_back(bch(*L, basis[i], basis[j]));
    Lattice next = Lattice::span(k, extra);
    if (next == lat) {
      for (auto& v : bch_closure_vectors(*L, lat)) extra.push_back(std::move(v));
      next = Lattice::span(k, extra);
      if (next == lat) break;
    }
    lat = std::move(next);
  }
  LatticeGroup out(L, lat);
  out.rounds = rounds;
  out.embedding = embedding;
  return out;
}

DeltaData delta_data(const LatticeGroup& delta) {
  DeltaData d;
  d.d = delta.abelian_rank();
  auto lcs = lower_central_series(*delta.algebra());
  const std::size_t k = delta.algebra()->dim();
  d.derived = lcs.size() >= 2 ? intersect_subspace(delta.lattice(), lcs[1]) : Lattice::zero(k);
  return d;
}

Integer hull_index(const GenGroup& g, const LatticeGroup& delta) {
  if (!g.filtered)
    throw InvalidInput("index over a non-filtered generating set is not supported");
  const LieAlgebra& L = *delta.algebra();
  const std::size_t k = L.dim();
  std::vector<QVector> gens = g.generators;
  if (delta.embedding) {
    for (auto& v : gens) {
      auto s = solve_left(*delta.embedding, v);
      if (!s) throw InvalidInput("generator outside the hull's algebra");
      v = *s;
    }
  }
  auto lcs = lower_central_series(L);
  const std::size_t c = lcs.size();
  Integer index = 1;
  for (std::size_t j = 0; j < c; ++j) {
    const std::vector<QVector> empty;
    const auto& below = j + 1 < c ? lcs[j + 1] : empty;
    std::vector<QVector> gl, dl;
    for (const auto& v : gens)
      if (in_subspace(v, lcs[j]) && !in_subspace(v, below))
        gl.push_back(reduce_mod_subspace(v, below));
    for (std::size_t i = delta.layer_begin(j + 1); i < delta.layer_begin(j + 1) + delta.layer_sizes()[j]; ++i)
      dl.push_back(reduce_mod_subspace(delta.basis()[i], below));
    Lattice G = Lattice::span(k, gl), D = Lattice::span(k, dl);
    if (G.rank() != D.rank() || !is_sublattice(G, D))
      throw InvalidInput("generators do not form a filtered basis of a subgroup of the hull");
    index *= lattice_index(D, G);
  }
  return index;
}

GroupElement root(const GroupElement& g, const Integer& m) {
  if (m == 0) throw InvalidInput("root of order zero");
  return group_pow(g, Rational(1) / Rational(m));
}

namespace {

bool integer_valued(const std::vector<Polynomial>& map) {
  for (const auto& v : binomial_coefficient_vectors(map))
    if (!is_integral(v)) return false;
  return true;
}

std::vector<Polynomial> poly_vars(std::size_t k, std::size_t offset, std::size_t nvars,
                                  const Rational& factor) {
  std::vector<Polynomial> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(Polynomial::variable(nvars, offset + i) * factor);
  return v;
}

std::vector<Polynomial> lin(const std::vector<Polynomial>& a, const Rational& ca,
                            const std::vector<Polynomial>& b, const Rational& cb) {
  std::vector<Polynomial> r;
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] * ca + b[i] * cb);
  return r;
}

}  // namespace

bool is_congruence_scale(const LatticeGroup& delta, const Integer& s) {
  if (s <= 0) throw InvalidInput("congruence scale must be positive");
  const LieAlgebra& B = *delta.basis_algebra();
  const std::size_t k = B.dim(), n = 2 * k;
  const Rational inv = Rational(1) / Rational(s), S(s);
  auto X = poly_vars(k, 0, n, 1), Y = poly_vars(k, k, n, 1);
  auto sY = poly_vars(k, k, n, S);
  auto zero = poly_vars(k, 0, n, 0);
  // s*Lambda closed
  if (!integer_valued(lin(bch(B, lin(X, S, zero, 0), sY), inv, zero, 0))) return false;
  // x * exp(s*Lambda) lies in x + s*Lambda
  auto xy = bch(B, X, sY);
  if (!integer_valued(lin(xy, inv, X, -inv))) return false;
  // and conversely x + s*Lambda lies in x * exp(s*Lambda)
  if (!integer_valued(lin(bch(B, lin(X, -1, zero, 0), lin(X, 1, sY, 1)), inv, zero, 0)))
    return false;
  // normality
  if (!integer_valued(lin(bch(B, xy, lin(X, -1, zero, 0)), inv, zero, 0))) return false;
  return true;
}

CongruenceLevel congruence_level(const LatticeGroup& delta, const Integer& m, unsigned max_power) {
  if (m <= 0) throw InvalidInput("level must be positive");
  Integer base = 1;
  for (unsigned i = 2; i <= delta.nilpotency_class(); ++i) base = lcm(base, Integer(i));
  Integer D = 1;
  for (unsigned p = 0; p <= max_power; ++p) {
    if (is_congruence_scale(delta, m * D)) return {m, D, m * D};
    if (base == 1) break;
    D *= base;
  }
  throw CapExceeded("no congruence scale found for level " + m.get_str());
}

}  // namespace nilcsp
