#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilcsp {

using Integer = mpz_class;
using Rational = mpq_class;
using QVector = std::vector<Rational>;
using ZVector = std::vector<Integer>;

// Base class for all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-domain input.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A search or enumeration hit its configured cap before reaching a verdict.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

QVector zero_vector(std::size_t n);
QVector unit_vector(std::size_t n, std::size_t i);
bool is_zero(const QVector& v);
bool is_integral(const QVector& v);
QVector add(const QVector& a, const QVector& b);
QVector sub(const QVector& a, const QVector& b);
QVector scale(const Rational& c, const QVector& v);
// c*v added into acc in place.
void axpy(QVector& acc, const Rational& c, const QVector& v);
QVector to_rational(const ZVector& v);
// Throws InvalidInput if some entry is not an integer.
ZVector to_integer(const QVector& v);

Integer lcm_of_denominators(const QVector& v);
Integer floor_div(const Integer& a, const Integer& b);
Integer mod_floor(const Integer& a, const Integer& m);
Integer factorial(unsigned n);
Integer binomial(long n, unsigned k);

// int64 helpers used on the hot paths.
std::int64_t mod_i64(std::int64_t a, std::int64_t m);
std::int64_t to_i64(const Integer& z);  // throws if it does not fit
bool fits_i64(const Integer& z);

}  // namespace nilcsp
