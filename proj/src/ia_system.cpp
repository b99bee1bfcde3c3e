#include "nilcsp/ia_system.hpp"

#include <numeric>
#include <set>

namespace nilcsp {

namespace {

using i128 = __int128;

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  // a and m coprime, m >= 1
  std::int64_t g = m, x = 0, x1 = 1, a1 = mod_i64(a, m);
  if (m == 1) return 0;
  while (a1) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  return mod_i64(x, m);
}

std::int64_t checked(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw CapExceeded("int64 overflow in automorphism search");
  return static_cast<std::int64_t>(v);
}

}  // namespace

IaSystem::IaSystem(LatticeGroupPtr delta) : delta_(std::move(delta)), k_(delta_->dim()) {
  const LieAlgebra& B = *delta_->basis_algebra();
  unknown_id_.assign(k_ * k_, -1);
  for (std::size_t q = 0; q < k_; ++q) {
    Column col;
    col.q = q;
    for (std::size_t r = 0; r < q; ++r) {
      if (delta_->layer_of(r) == 1 && delta_->layer_of(q) == 1) continue;
      unknown_id_[r * k_ + q] = static_cast<int>(unknowns_.size());
      col.rows.push_back(r);
      col.ids.push_back(unknowns_.size());
      unknowns_.push_back({r, q});
    }
    if (!col.rows.empty()) columns_.push_back(std::move(col));
  }
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t j = i + 1; j < k_; ++j) {
      pairs_.emplace_back(i, j);
      std::vector<std::int64_t> c(k_);
      for (std::size_t l = 0; l < k_; ++l) c[l] = to_i64(B.structure(i, j)[l].get_num());
      pair_const_.push_back(std::move(c));
    }
  into_.resize(k_);
  for (std::size_t a = 0; a < k_; ++a)
    for (std::size_t b = 0; b < k_; ++b)
      for (std::size_t q = 0; q < k_; ++q) {
        const Rational& c = B.structure(a, b)[q];
        if (c == 0) continue;
        if (delta_->layer_of(a) + delta_->layer_of(b) > delta_->layer_of(q))
          throw Error("structure constants do not respect the adapted filtration");
        into_[q].push_back({a, b, to_i64(c.get_num())});
      }
  for (auto& col : columns_) {
    col.C = ZMatrix(pairs_.size(), col.rows.size());
    for (std::size_t p = 0; p < pairs_.size(); ++p)
      for (std::size_t t = 0; t < col.rows.size(); ++t) col.C(p, t) = pair_const_[p][col.rows[t]];
    col.smith = smith_form(col.C);
    col.Vinv = unimodular_inverse(col.smith.V);
  }
  build_conditions();
}

std::vector<std::int64_t> IaSystem::dense(const std::vector<std::int64_t>& values) const {
  std::vector<std::int64_t> A(k_ * k_, 0);
  for (std::size_t i = 0; i < k_; ++i) A[i * k_ + i] = 1;
  for (std::size_t u = 0; u < unknowns_.size(); ++u)
    A[unknowns_[u].row * k_ + unknowns_[u].col] = values[u];
  return A;
}

ZMatrix IaSystem::matrix(const std::vector<std::int64_t>& values) const {
  auto A = dense(values);
  ZMatrix M(k_, k_);
  for (std::size_t i = 0; i < k_ * k_; ++i) M(i / k_, i % k_) = static_cast<long>(A[i]);
  return M;
}

std::vector<std::int64_t> IaSystem::values_of(const ZMatrix& A) const {
  if (A.rows() != k_ || A.cols() != k_) throw DimensionMismatch("matrix size differs from the group");
  std::vector<std::int64_t> v(unknowns_.size());
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t j = 0; j < k_; ++j) {
      int id = unknown_id_[i * k_ + j];
      if (id >= 0) {
        v[id] = to_i64(A(i, j));
      } else if (A(i, j) != (i == j ? 1 : 0)) {
        throw InvalidInput("matrix is not block unitriangular with identity abelian block");
      }
    }
  return v;
}

std::vector<std::int64_t> IaSystem::rhs(std::size_t c, const std::vector<std::int64_t>& A,
                                        std::int64_t s) const {
  const std::size_t q = columns_[c].q;
  std::vector<std::int64_t> f(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    auto [i, j] = pairs_[p];
    i128 acc = -static_cast<i128>(pair_const_[p][q]);
    for (const auto& e : into_[q]) {
      std::int64_t x = A[i * k_ + e.a], y = A[j * k_ + e.b];
      if (x == 0 || y == 0) continue;
      acc += static_cast<i128>(x) * y * e.c;
      if (s > 0) acc %= s;
    }
    f[p] = s > 0 ? mod_i64(static_cast<std::int64_t>(acc % s), s) : checked(acc);
  }
  return f;
}

bool IaSystem::satisfies_lie_equations(const std::vector<std::int64_t>& A) const {
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    auto [i, j] = pairs_[p];
    for (std::size_t q = 0; q < k_; ++q) {
      i128 lhs = 0, rhs_v = 0;
      for (std::size_t l = 0; l < k_; ++l)
        if (pair_const_[p][l]) rhs_v += static_cast<i128>(pair_const_[p][l]) * A[l * k_ + q];
      for (const auto& e : into_[q]) lhs += static_cast<i128>(A[i * k_ + e.a]) * A[j * k_ + e.b] * e.c;
      if (lhs != rhs_v) return false;
    }
  }
  return true;
}

void IaSystem::build_conditions() {
  conditions_.assign(columns_.size(), {});
  const std::size_t F = unknowns_.size();
  if (F == 0) return;
  const std::size_t nx = 2 * k_, nv = nx + F;
  std::vector<std::size_t> column_of_unknown(F);
  for (std::size_t c = 0; c < columns_.size(); ++c)
    for (auto id : columns_[c].ids) column_of_unknown[id] = c;
  auto entry = [&](std::size_t r, std::size_t q) {
    if (r == q) return Polynomial::constant(nv, 1);
    int id = unknown_id_[r * k_ + q];
    if (id < 0) return Polynomial(nv);
    return Polynomial::variable(nv, nx + static_cast<std::size_t>(id));
  };
  std::vector<Polynomial> subst(nx, Polynomial(nv));
  for (std::size_t q = 0; q < k_; ++q)
    for (std::size_t r = 0; r < k_; ++r) {
      Polynomial a = entry(r, q);
      if (a.is_zero()) continue;
      subst[q] += Polynomial::variable(nv, r) * a;
      subst[k_ + q] += Polynomial::variable(nv, k_ + r) * a;
    }
  const auto& P = delta_->law().polynomials();
  std::vector<Polynomial> Pext;
  for (const auto& p : P) Pext.push_back(p.extended(nv));
  std::set<std::string> seen;
  for (std::size_t q = 0; q < k_; ++q) {
    Polynomial R = P[q].compose(subst);
    for (std::size_t l = 0; l < k_; ++l) {
      Polynomial a = entry(l, q);
      if (!a.is_zero()) R -= Pext[l] * a;
    }
    for (const auto& [mono, coeff] : binomial_expansion(R, nx)) {
      Condition cond;
      Integer den = 1;
      for (const auto& [m, c] : coeff.terms()) den = lcm(den, Integer(c.get_den()));
      cond.den = to_i64(den);
      std::size_t ready = 0;
      std::string key = std::to_string(cond.den) + ":";
      for (const auto& [m, c] : coeff.terms()) {
        Term t;
        t.coeff = to_i64(Rational(c * den).get_num());
        key += std::to_string(t.coeff) + "*";
        for (std::size_t v = nx; v < nv; ++v)
          if (m[v]) {
            t.factors.emplace_back(static_cast<std::uint16_t>(v - nx), m[v]);
            ready = std::max(ready, column_of_unknown[v - nx]);
            key += std::to_string(v - nx) + "^" + std::to_string(m[v]) + ".";
          }
        key += "+";
        cond.terms.push_back(std::move(t));
      }
      if (!seen.insert(key).second) continue;
      conditions_[ready].push_back(std::move(cond));
    }
  }
}

std::size_t IaSystem::condition_count() const {
  std::size_t n = 0;
  for (const auto& c : conditions_) n += c.size();
  return n;
}

bool IaSystem::conditions_hold(std::size_t ci, const std::vector<std::int64_t>& values,
                               std::int64_t s) const {
  for (const auto& cond : conditions_[ci]) {
    const i128 M = static_cast<i128>(s) * cond.den;
    i128 acc = 0;
    for (const auto& t : cond.terms) {
      i128 v = t.coeff % M;
      for (auto [id, e] : t.factors)
        for (unsigned i = 0; i < e; ++i) v = (v * values[id]) % M;
      acc = (acc + v) % M;
    }
    if (acc != 0) return false;
  }
  return true;
}

std::size_t IaSystem::enumerate_mod(std::int64_t s, const ModOptions& opts,
                                    const std::function<void(const std::vector<std::int64_t>&)>& visit) const {
  if (s <= 0) throw InvalidInput("modulus must be positive");
  std::vector<std::int64_t> values(unknowns_.size(), 0);
  std::vector<std::int64_t> A = dense(values);
  std::size_t count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t ci) {
    if (ci == columns_.size()) {
      if (++count > opts.cap) throw CapExceeded("more than " + std::to_string(opts.cap) + " points mod " + std::to_string(s));
      visit(values);
      return;
    }
    const Column& col = columns_[ci];
    const std::size_t np = pairs_.size(), nu = col.rows.size(), r = col.smith.rank();
    auto f = rhs(ci, A, s);
    std::vector<std::int64_t> g(np);
    for (std::size_t i = 0; i < np; ++i) {
      i128 acc = 0;
      for (std::size_t j = 0; j < np; ++j)
        if (f[j]) acc = (acc + static_cast<i128>(mod_i64(to_i64(col.smith.U(i, j) % s), s)) * f[j]) % s;
      g[i] = static_cast<std::int64_t>(acc);
    }
    for (std::size_t i = r; i < np; ++i)
      if (g[i] != 0) return;
    // choices for each y coordinate
    std::vector<std::vector<std::int64_t>> choice(nu);
    for (std::size_t i = 0; i < nu; ++i) {
      if (i < r) {
        std::int64_t d = mod_i64(to_i64(col.smith.diagonal[i] % s), s);
        std::int64_t gg = std::gcd(d, s);
        if (gg == 0) gg = s;
        if (g[i] % gg != 0) return;
        std::int64_t sm = s / gg;
        std::int64_t base = sm == 1 ? 0 : mod_i64(static_cast<std::int64_t>((static_cast<i128>(g[i] / gg) * mod_inverse(d / gg, sm)) % sm), sm);
        for (std::int64_t t = 0; t < gg; ++t) choice[i].push_back(base + sm * t);
      } else {
        for (std::int64_t t = 0; t < s; ++t) choice[i].push_back(t);
      }
    }
    std::vector<std::size_t> idx(nu, 0);
    std::vector<std::int64_t> V(nu * nu);
    for (std::size_t a = 0; a < nu; ++a)
      for (std::size_t b = 0; b < nu; ++b) V[a * nu + b] = mod_i64(to_i64(col.smith.V(a, b) % s), s);
    for (;;) {
      for (std::size_t a = 0; a < nu; ++a) {
        i128 acc = 0;
        for (std::size_t b = 0; b < nu; ++b) acc += static_cast<i128>(V[a * nu + b]) * choice[b][idx[b]];
        std::int64_t x = static_cast<std::int64_t>(acc % s);
        values[col.ids[a]] = x;
        A[col.rows[a] * k_ + col.q] = x;
      }
      if (!opts.group_law || conditions_hold(ci, values, s)) rec(ci + 1);
      std::size_t i = 0;
      while (i < nu && ++idx[i] == choice[i].size()) idx[i++] = 0;
      if (i == nu) break;
    }
    for (std::size_t a = 0; a < nu; ++a) {
      values[col.ids[a]] = 0;
      A[col.rows[a] * k_ + col.q] = 0;
    }
  };
  rec(0);
  return count;
}

IaSystem::LiftResult IaSystem::lift(const std::vector<std::int64_t>& residues, std::int64_t s,
                                    const LiftOptions& opts) const {
  std::vector<std::int64_t> values(unknowns_.size(), 0);
  std::vector<std::int64_t> A = dense(values);
  std::size_t nodes = 0;
  bool budget_hit = false;
  std::vector<std::int64_t> shifts{0};
  for (std::int64_t t = 1; t <= opts.shift_range; ++t) {
    shifts.push_back(t);
    shifts.push_back(-t);
  }
  std::function<bool(std::size_t)> rec = [&](std::size_t ci) -> bool {
    if (ci == columns_.size()) return true;
    if (++nodes > opts.node_budget) {
      budget_hit = true;
      return false;
    }
    const Column& col = columns_[ci];
    const std::size_t np = pairs_.size(), nu = col.rows.size(), r = col.smith.rank();
    auto f = rhs(ci, A, 0);
    std::vector<i128> g(np, 0);
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j)
        if (f[j]) g[i] += static_cast<i128>(to_i64(col.smith.U(i, j))) * f[j];
    for (std::size_t i = r; i < np; ++i)
      if (g[i] != 0) return false;
    // target residues of y = V^{-1} x
    std::vector<std::int64_t> target(nu);
    for (std::size_t a = 0; a < nu; ++a) {
      i128 acc = 0;
      for (std::size_t b = 0; b < nu; ++b)
        acc += static_cast<i128>(to_i64(col.Vinv(a, b))) * residues[col.ids[b]];
      target[a] = mod_i64(static_cast<std::int64_t>(acc % s), s);
    }
    std::vector<std::int64_t> y(nu);
    for (std::size_t i = 0; i < r; ++i) {
      std::int64_t d = to_i64(col.smith.diagonal[i]);
      if (g[i] % d != 0) return false;
      y[i] = checked(g[i] / d);
      if (mod_i64(y[i], s) != target[i]) return false;
    }
    // centered base for the free coordinates
    std::vector<std::int64_t> base(nu);
    for (std::size_t i = r; i < nu; ++i) base[i] = target[i] > s / 2 ? target[i] - s : target[i];
    std::vector<std::size_t> idx(nu, 0);
    for (;;) {
      for (std::size_t i = r; i < nu; ++i) y[i] = base[i] + s * shifts[idx[i]];
      for (std::size_t a = 0; a < nu; ++a) {
        i128 acc = 0;
        for (std::size_t b = 0; b < nu; ++b) acc += static_cast<i128>(to_i64(col.smith.V(a, b))) * y[b];
        std::int64_t x = checked(acc);
        values[col.ids[a]] = x;
        A[col.rows[a] * k_ + col.q] = x;
      }
      if (rec(ci + 1)) return true;
      if (budget_hit) return false;
      std::size_t i = r;
      while (i < nu && ++idx[i] == shifts.size()) idx[i++] = 0;
      if (i >= nu) break;
    }
    for (std::size_t a = 0; a < nu; ++a) {
      values[col.ids[a]] = 0;
      A[col.rows[a] * k_ + col.q] = 0;
    }
    return false;
  };
  if (residues.size() != unknowns_.size()) throw DimensionMismatch("residue vector length");
  if (rec(0)) return {LiftStatus::lifted, values};
  return {budget_hit ? LiftStatus::budget : LiftStatus::not_found, {}};
}

}  // namespace nilcsp
