#include "nilcsp/polynomial.hpp"

namespace nilcsp {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m.at(i) = 1;
  p.add_term(m, 1);
  return p;
}

unsigned Polynomial::degree() const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) {
    unsigned s = 0;
    for (auto e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  if (m.size() != nvars_) throw DimensionMismatch("monomial arity");
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionMismatch("polynomial rings differ");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionMismatch("polynomial rings differ");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, x] : terms_) x *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw DimensionMismatch("polynomial rings differ");
  Polynomial r(a.nvars_);
  Monomial m(a.nvars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  return r;
}

Rational Polynomial::evaluate(const QVector& point) const {
  if (point.size() != nvars_) throw DimensionMismatch("evaluation point arity");
  Rational acc = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (unsigned e = 0; e < m[i]; ++e) t *= point[i];
    acc += t;
  }
  return acc;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& values) const {
  if (values.size() != nvars_) throw DimensionMismatch("compose: wrong number of values");
  std::size_t target = values.empty() ? 0 : values[0].nvars();
  Polynomial r(target);
  // cache powers per variable
  std::vector<std::vector<Polynomial>> powers(nvars_);
  for (const auto& [m, c] : terms_) {
    Polynomial t = Polynomial::constant(target, c);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(Polynomial::constant(target, 1));
      while (pw.size() <= m[i]) pw.push_back(pw.back() * values[i]);
      t = t * pw[m[i]];
    }
    r += t;
  }
  return r;
}

Polynomial Polynomial::extended(std::size_t nvars) const {
  if (nvars < nvars_) throw DimensionMismatch("cannot shrink polynomial ring");
  Polynomial r(nvars);
  for (const auto& [m, c] : terms_) {
    Monomial e = m;
    e.resize(nvars, 0);
    r.add_term(e, c);
  }
  return r;
}

Integer stirling2(unsigned n, unsigned k) {
  if (n == 0 && k == 0) return 1;
  if (n == 0 || k == 0 || k > n) return 0;
  std::vector<Integer> row(k + 1, 0);
  row[0] = 1;  // S(0,0)
  for (unsigned i = 1; i <= n; ++i) {
    for (unsigned j = std::min(i, k); j >= 1; --j) row[j] = Integer(j) * row[j] + row[j - 1];
    row[0] = 0;
  }
  return row[k];
}

std::map<Monomial, Polynomial> binomial_expansion(const Polynomial& p, std::size_t nbin) {
  // x^e = sum_j S(e, j) j! C(x, j)
  const std::size_t n = p.nvars();
  if (nbin > n) throw DimensionMismatch("binomial_expansion: too many binomial variables");
  std::map<Monomial, Polynomial> out;
  for (const auto& [m, c] : p.terms()) {
    Monomial rest(n, 0);
    for (std::size_t i = nbin; i < n; ++i) rest[i] = m[i];
    // expand the product over binomial variables
    std::vector<std::pair<Monomial, Rational>> acc{{Monomial(nbin, 0), c}};
    for (std::size_t i = 0; i < nbin; ++i) {
      if (m[i] == 0) continue;
      std::vector<std::pair<Monomial, Rational>> next;
      for (const auto& [mono, coef] : acc)
        for (unsigned j = 1; j <= m[i]; ++j) {
          Monomial mm = mono;
          mm[i] = static_cast<std::uint8_t>(j);
          next.emplace_back(mm, coef * Rational(stirling2(m[i], j) * factorial(j)));
        }
      acc = std::move(next);
    }
    for (const auto& [mono, coef] : acc) {
      auto it = out.try_emplace(mono, Polynomial(n)).first;
      it->second.add_term(rest, coef);
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

}  // namespace nilcsp
