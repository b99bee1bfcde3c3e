#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "nilcsp/rational.hpp"

namespace nilcsp {

using Monomial = std::vector<std::uint8_t>;  // exponent per variable

// Sparse multivariate polynomial over Q in a fixed number of variables.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}
  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);

  std::size_t nvars() const { return nvars_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;

  void add_term(const Monomial& m, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  // comparison with a scalar is only used as a zero test in generic code
  friend bool operator==(const Polynomial& a, int z) {
    return z == 0 ? a.is_zero() : a == constant(a.nvars_, z);
  }

  Rational evaluate(const QVector& point) const;
  // substitute polynomials (all in one common ring) for every variable
  Polynomial compose(const std::vector<Polynomial>& values) const;
  // the same polynomial viewed in a ring with extra trailing variables
  Polynomial extended(std::size_t nvars) const;

 private:
  std::size_t nvars_ = 0;
  std::map<Monomial, Rational> terms_;
};

// Expansion in the binomial basis prod_i C(x_i, a_i) restricted to the
// variables [0, nbin); the remaining variables stay in the coefficients.
// A polynomial is integer-valued on Z^n iff (with nbin == n) every
// coefficient is an integer.
std::map<Monomial, Polynomial> binomial_expansion(const Polynomial& p, std::size_t nbin);

// Stirling numbers of the second kind S(n, k).
Integer stirling2(unsigned n, unsigned k);

}  // namespace nilcsp
