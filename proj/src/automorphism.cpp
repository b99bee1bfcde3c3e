#include "nilcsp/automorphism.hpp"

#include <set>

namespace nilcsp {

LieAutCheck is_lie_aut(const LieAlgebra& L, const QMatrix& A) {
  const std::size_t k = L.dim();
  if (A.rows() != k || A.cols() != k) throw DimensionMismatch("automorphism matrix has the wrong size");
  if (determinant(A) == 0) throw InvalidInput("matrix is singular");
  std::vector<QVector> image(k);
  for (std::size_t i = 0; i < k; ++i) image[i] = A.row_vector(i);
  QVector lhs, rhs(k);
  Rational tmp;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      L.bracket_into(image[i], image[j], lhs, tmp);
      for (auto& v : rhs) v = 0;
      const QVector& c = L.structure(i, j);
      for (std::size_t l = 0; l < k; ++l) {
        if (c[l] == 0) continue;
        for (std::size_t m = 0; m < k; ++m) {
          if (A(l, m) == 0) continue;
          tmp = c[l] * A(l, m);
          rhs[m] += tmp;
        }
      }
      if (lhs != rhs) return {false, std::make_pair(i, j)};
    }
  return {};
}

bool stabilizes_lattice(const QMatrix& A, const Lattice& lattice) {
  if (A.rows() != lattice.dim() || A.cols() != lattice.dim())
    throw DimensionMismatch("matrix and lattice dimensions differ");
  QMatrix Ainv = inverse(A);
  for (const auto& b : lattice.basis()) {
    if (!lattice.contains(row_times(b, A))) return false;
    if (!lattice.contains(row_times(b, Ainv))) return false;
  }
  return true;
}

QMatrix to_basis_matrix(const LatticeGroup& delta, const QMatrix& ambient) {
  const std::size_t k = delta.dim();
  QMatrix out(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    QVector row = delta.to_basis(row_times(delta.basis()[i], ambient));
    for (std::size_t j = 0; j < k; ++j) out(i, j) = row[j];
  }
  return out;
}

QMatrix from_basis_matrix(const LatticeGroup& delta, const QMatrix& in_basis) {
  const std::size_t k = delta.dim();
  QMatrix out(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    QVector row = delta.from_basis(row_times(delta.to_basis(unit_vector(k, i)), in_basis));
    for (std::size_t j = 0; j < k; ++j) out(i, j) = row[j];
  }
  return out;
}

bool is_ia_star(const LatticeGroup& delta, const QMatrix& A, std::string* reason) {
  auto fail = [&](std::string why) {
    if (reason) *reason = std::move(why);
    return false;
  };
  const std::size_t k = delta.dim(), d = delta.abelian_rank();
  if (A.rows() != k || A.cols() != k) throw DimensionMismatch("automorphism matrix has the wrong size");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (A(i, j) != (i == j ? 1 : 0)) return fail("not unitriangular");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (A(i, j) != (i == j ? 1 : 0)) return fail("not the identity modulo L'");
  auto lie = is_lie_aut(*delta.basis_algebra(), A);
  if (!lie.ok)
    return fail("bracket mismatch on pair (" + std::to_string(lie.witness->first) + "," +
                std::to_string(lie.witness->second) + ")");
  // unitriangular, so the inverse is integral iff A is
  if (!is_integral(A)) return fail("does not stabilize the lattice");
  return true;
}

ZMatrix aut_star_image(const LatticeGroup& delta, const QMatrix& A) {
  const std::size_t k = delta.dim(), d = delta.abelian_rank();
  if (A.rows() != k || A.cols() != k) throw DimensionMismatch("automorphism matrix has the wrong size");
  for (std::size_t i = d; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (A(i, j) != 0) throw Error("matrix does not preserve L'");
  QMatrix top = A.block(0, 0, d, d);
  if (!is_integral(top)) throw Error("induced action is not integral");
  ZMatrix out = to_integer(top);
  Integer det = integer_determinant(out);
  if (det != 1 && det != -1) throw Error("induced action is not unimodular");
  return out;
}

std::size_t ia_rank(const LieAlgebra& L) {
  const std::size_t k = L.dim();
  std::vector<QVector> derived;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) derived.push_back(L.structure(i, j));
  std::vector<QVector> W = row_space_basis(derived, k);
  const std::size_t r = W.size(), nvar = k * r;
  if (nvar == 0) return 0;
  // variable (l, t): D b_l has coefficient X[l][t] on W[t]
  std::vector<QVector> brW(r * k);  // [w_t, b_j]
  for (std::size_t t = 0; t < r; ++t)
    for (std::size_t j = 0; j < k; ++j) brW[t * k + j] = L.bracket(W[t], unit_vector(k, j));
  const std::size_t npairs = k * (k - 1) / 2;
  QMatrix M(nvar, npairs * k);
  std::size_t p = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j, ++p) {
      const QVector& c = L.structure(i, j);
      for (std::size_t t = 0; t < r; ++t) {
        for (std::size_t l = 0; l < k; ++l)
          if (c[l] != 0)
            for (std::size_t q = 0; q < k; ++q) M(l * r + t, p * k + q) += c[l] * W[t][q];
        // minus [D b_i, b_j] + [b_i, D b_j] = [w_t, b_j] X[i][t] - [w_t, b_i] X[j][t]
        for (std::size_t q = 0; q < k; ++q) {
          M(i * r + t, p * k + q) -= brW[t * k + j][q];
          M(j * r + t, p * k + q) += brW[t * k + i][q];
        }
      }
    }
  return nvar - rank(M);
}

std::vector<ZMatrix> enumerate_ia_star(const IaSystem& sys, std::int64_t bound,
                                       const EnumerateOptions& opts) {
  if (bound < 0) throw InvalidInput("entry bound must be non-negative");
  const std::size_t k = sys.dim();
  if (k > opts.max_dim) throw CapExceeded("dimension " + std::to_string(k) + " above the enumeration cap");
  const auto& cols = sys.columns();
  std::vector<std::int64_t> values(sys.unknowns().size(), 0);
  std::vector<std::int64_t> A = sys.dense(values);
  std::vector<ZMatrix> out;
  std::function<void(std::size_t)> rec = [&](std::size_t ci) {
    if (ci == cols.size()) {
      ZMatrix M = sys.matrix(values);
      std::string why;
      if (!is_ia_star(sys.delta(), to_rational(M), &why)) throw Error("enumerated matrix fails IA* check: " + why);
      if (out.size() >= opts.cap) throw CapExceeded("more than " + std::to_string(opts.cap) + " IA* elements");
      out.push_back(std::move(M));
      return;
    }
    const auto& col = cols[ci];
    const std::size_t nu = col.rows.size(), np = col.C.rows();
    auto f = sys.rhs(ci, A, 0);
    std::vector<std::int64_t> x(nu, -bound);
    for (;;) {
      bool ok = true;
      for (std::size_t p = 0; p < np && ok; ++p) {
        __int128 acc = 0;
        for (std::size_t t = 0; t < nu; ++t)
          if (x[t]) acc += static_cast<__int128>(to_i64(col.C(p, t))) * x[t];
        ok = acc == f[p];
      }
      if (ok) {
        for (std::size_t t = 0; t < nu; ++t) {
          values[col.ids[t]] = x[t];
          A[col.rows[t] * k + col.q] = x[t];
        }
        rec(ci + 1);
      }
      std::size_t t = 0;
      while (t < nu && x[t] == bound) x[t++] = -bound;
      if (t == nu) break;
      ++x[t];
    }
    for (std::size_t t = 0; t < nu; ++t) {
      values[col.ids[t]] = 0;
      A[col.rows[t] * k + col.q] = 0;
    }
  };
  rec(0);
  return out;
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "inconclusive";
  }
}

std::int64_t congruence_scale(const LatticeGroup& delta, std::int64_t m) {
  if (m <= 0) throw InvalidInput("level must be positive");
  return to_i64(congruence_level(delta, Integer(static_cast<long>(m))).scale);
}

namespace {

bool reduces_to(const std::vector<std::int64_t>& lift, const std::vector<std::int64_t>& residues,
                std::int64_t s) {
  for (std::size_t i = 0; i < lift.size(); ++i)
    if (mod_i64(lift[i], s) != residues[i]) return false;
  return true;
}

}  // namespace

StrongApproxReport strong_approx_check(const IaSystem& sys, std::int64_t m,
                                       const StrongApproxOptions& opts) {
  StrongApproxReport rep;
  rep.m = m;
  try {
    rep.scale = congruence_scale(sys.delta(), m);
    std::vector<std::vector<std::int64_t>> pts;
    IaSystem::ModOptions mo;
    mo.cap = opts.point_cap;
    rep.points = sys.enumerate_mod(rep.scale, mo, [&](const auto& v) { pts.push_back(v); });
    if (opts.count_naive) {
      mo.group_law = false;
      rep.naive_points = sys.enumerate_mod(rep.scale, mo, [](const auto&) {});
    }
    bool budget = false;
    for (const auto& p : pts) {
      auto res = sys.lift(p, rep.scale, opts.lift);
      if (res.status == IaSystem::LiftStatus::lifted) {
        if (!sys.satisfies_lie_equations(sys.dense(res.values)) || !reduces_to(res.values, p, rep.scale))
          throw Error("lift verification failed");
        ++rep.lifted;
        if (opts.keep_lifts) rep.lifts.emplace_back(p, res.values);
        continue;
      }
      if (rep.witness.empty()) rep.witness = p;
      if (res.status == IaSystem::LiftStatus::budget) budget = true;
    }
    if (rep.lifted == rep.points) {
      rep.status = CheckStatus::pass;
    } else {
      // a bounded search that found nothing is not a refutation
      rep.status = CheckStatus::inconclusive;
      rep.note = budget ? "lift search budget exhausted" : "no lift within the shift range";
    }
  } catch (const CapExceeded& e) {
    rep.status = CheckStatus::inconclusive;
    rep.note = e.what();
  }
  return rep;
}

std::optional<std::vector<std::int64_t>> random_lift(const IaSystem& sys,
                                                      const std::vector<std::int64_t>& residues,
                                                      std::int64_t s, std::mt19937_64& rng,
                                                      std::int64_t shift_range) {
  const std::size_t k = sys.dim();
  std::vector<std::int64_t> values(sys.unknowns().size(), 0);
  std::vector<std::int64_t> A = sys.dense(values);
  std::uniform_int_distribution<std::int64_t> shift(-shift_range, shift_range);
  for (std::size_t ci = 0; ci < sys.columns().size(); ++ci) {
    const auto& col = sys.columns()[ci];
    const std::size_t np = col.C.rows(), nu = col.rows.size(), r = col.smith.rank();
    auto f = sys.rhs(ci, A, 0);
    std::vector<Integer> y(nu);
    for (std::size_t i = 0; i < np; ++i) {
      Integer g = 0;
      for (std::size_t j = 0; j < np; ++j) g += col.smith.U(i, j) * Integer(static_cast<long>(f[j]));
      if (i >= r) {
        if (g != 0) return std::nullopt;
        continue;
      }
      if (g % col.smith.diagonal[i] != 0) return std::nullopt;
      y[i] = g / col.smith.diagonal[i];
    }
    for (std::size_t a = 0; a < nu; ++a) {
      Integer t = 0;
      for (std::size_t b = 0; b < nu; ++b) t += col.Vinv(a, b) * Integer(static_cast<long>(residues[col.ids[b]]));
      Integer target = mod_floor(t, Integer(static_cast<long>(s)));
      if (a < r) {
        if (mod_floor(y[a], Integer(static_cast<long>(s))) != target) return std::nullopt;
      } else {
        y[a] = target + Integer(static_cast<long>(s * shift(rng)));
      }
    }
    for (std::size_t a = 0; a < nu; ++a) {
      Integer x = 0;
      for (std::size_t b = 0; b < nu; ++b) x += col.smith.V(a, b) * y[b];
      values[col.ids[a]] = to_i64(x);
      A[col.rows[a] * k + col.q] = values[col.ids[a]];
    }
  }
  if (!sys.satisfies_lie_equations(A) || !reduces_to(values, residues, s)) return std::nullopt;
  return values;
}

namespace {

std::vector<std::int64_t> mul_mod(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                                  std::size_t k, std::int64_t s) {
  std::vector<std::int64_t> c(k * k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = i; l < k; ++l) {
      std::int64_t x = a[i * k + l];
      if (!x) continue;
      for (std::size_t j = l; j < k; ++j)
        c[i * k + j] = static_cast<std::int64_t>((c[i * k + j] + static_cast<__int128>(x) * b[l * k + j]) % s);
    }
  return c;
}

}  // namespace

CspResult csp_witness(const IaSystem& sys, const std::vector<ZMatrix>& generators, std::size_t h,
                      std::int64_t level_cap, const CspOptions& opts) {
  if (h == 0) throw InvalidInput("index must be positive");
  for (const auto& g : generators) {
    std::string why;
    if (!is_ia_star(sys.delta(), to_rational(g), &why)) throw InvalidInput("generator is not in IA*: " + why);
  }
  const std::size_t k = sys.dim();
  CspResult out;
  std::string notes;
  for (std::int64_t m = 1; m <= level_cap; ++m) {
    StrongApproxOptions so;
    so.point_cap = opts.point_cap;
    so.lift = opts.lift;
    auto sa = strong_approx_check(sys, m, so);
    if (sa.status != CheckStatus::pass) {
      notes += "level " + std::to_string(m) + ": " + sa.note + "; ";
      continue;
    }
    const std::int64_t s = sa.scale;
    if (sa.points % h != 0) continue;
    std::vector<std::vector<std::int64_t>> gens;
    for (const auto& g : generators) {
      auto v = sys.dense(sys.values_of(g));
      for (auto& e : v) e = mod_i64(e, s);
      gens.push_back(std::move(v));
    }
    std::vector<std::int64_t> id = sys.dense(std::vector<std::int64_t>(sys.unknowns().size(), 0));
    for (auto& e : id) e = mod_i64(e, s);
    std::set<std::vector<std::int64_t>> seen{id};
    std::vector<std::vector<std::int64_t>> frontier{id};
    bool capped = false;
    while (!frontier.empty() && !capped) {
      std::vector<std::vector<std::int64_t>> next;
      for (const auto& x : frontier)
        for (const auto& g : gens) {
          auto y = mul_mod(x, g, k, s);
          if (seen.insert(y).second) next.push_back(std::move(y));
          if (seen.size() > opts.orbit_cap) capped = true;
        }
      frontier = std::move(next);
    }
    if (capped) {
      notes += "level " + std::to_string(m) + ": image above orbit cap; ";
      continue;
    }
    if (seen.size() * h == sa.points) {
      out.status = CheckStatus::pass;
      out.m = m;
      out.scale = s;
      out.group_order = sa.points;
      out.image_order = seen.size();
      out.note = notes;
      return out;
    }
  }
  out.status = CheckStatus::inconclusive;
  out.note = notes.empty() ? "no level within the cap" : notes;
  return out;
}

std::optional<ZMatrix> extend_first_layer(const LatticeGroup& delta, const QMatrix& first_rows) {
  const std::size_t k = delta.dim(), d = delta.abelian_rank();
  if (first_rows.rows() != d || first_rows.cols() != k)
    throw DimensionMismatch("first-layer images must be " + std::to_string(d) + "x" + std::to_string(k));
  const LieAlgebra& B = *delta.basis_algebra();
  QMatrix A(k, k);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < k; ++j) A(i, j) = first_rows(i, j);
  for (std::size_t l = d; l < k; ++l) {
    // b_l as a rational combination of brackets of earlier basis elements
    std::vector<QVector> vals, imgs;
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = i + 1; j < l; ++j) {
        vals.push_back(B.structure(i, j));
        imgs.push_back(B.bracket(A.row_vector(i), A.row_vector(j)));
      }
    auto sol = solve_left(QMatrix::from_rows(vals, k), unit_vector(k, l));
    if (!sol) throw Error("adapted basis element is not in the span of brackets");
    QVector row = zero_vector(k);
    for (std::size_t t = 0; t < vals.size(); ++t) axpy(row, (*sol)[t], imgs[t]);
    for (std::size_t j = 0; j < k; ++j) A(l, j) = row[j];
  }
  if (!is_integral(A) || !is_lie_aut(B, A).ok) return std::nullopt;
  Integer det = integer_determinant(to_integer(A));
  if (det != 1 && det != -1) return std::nullopt;
  return to_integer(A);
}

}  // namespace nilcsp
