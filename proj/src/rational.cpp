#include "nilcsp/rational.hpp"

#include <cctype>

namespace nilcsp {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw InvalidInput("empty rational literal");
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-')
    throw InvalidInput("malformed rational literal '" + text + "'");
  Integer n(num), d(den);
  if (d == 0) throw InvalidInput("zero denominator in '" + text + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

QVector zero_vector(std::size_t n) { return QVector(n, Rational(0)); }

QVector unit_vector(std::size_t n, std::size_t i) {
  QVector v(n, Rational(0));
  v.at(i) = 1;
  return v;
}

bool is_zero(const QVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

bool is_integral(const QVector& v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

static void check_same(const QVector& a, const QVector& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("vector lengths " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
}

QVector add(const QVector& a, const QVector& b) {
  check_same(a, b);
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVector sub(const QVector& a, const QVector& b) {
  check_same(a, b);
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QVector scale(const Rational& c, const QVector& v) {
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
  return r;
}

void axpy(QVector& acc, const Rational& c, const QVector& v) {
  check_same(acc, v);
  if (c == 0) return;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) acc[i] += c * v[i];
}

QVector to_rational(const ZVector& v) {
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i];
  return r;
}

ZVector to_integer(const QVector& v) {
  ZVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1) throw InvalidInput("non-integral entry " + to_string(v[i]));
    r[i] = v[i].get_num();
  }
  return r;
}

Integer lcm_of_denominators(const QVector& v) {
  Integer l = 1;
  for (const auto& x : v) l = lcm(l, Integer(x.get_den()));
  return l;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (r < 0) r += abs(m);
  return r;
}

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial(long n, unsigned k) {
  Integer r;
  Integer nn(n);
  mpz_bin_ui(r.get_mpz_t(), nn.get_mpz_t(), k);
  return r;
}

std::int64_t mod_i64(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

static_assert(sizeof(long) == sizeof(std::int64_t), "expects an LP64 platform");

bool fits_i64(const Integer& z) { return z.fits_slong_p(); }

std::int64_t to_i64(const Integer& z) {
  if (!fits_i64(z)) throw CapExceeded("integer " + z.get_str() + " exceeds 64-bit range");
  return z.get_si();
}

}  // namespace nilcsp
