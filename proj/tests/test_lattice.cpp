#include <random>

#include "doctest.h"
#include "nilcsp/lattice.hpp"
#include "nilcsp/normal_forms.hpp"

using namespace nilcsp;

namespace {

QVector qv(std::initializer_list<Rational> xs) { return QVector(xs); }

ZMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  ZMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

bool is_hnf(const HermiteForm& h) {
  for (std::size_t i = 0; i < h.rank(); ++i) {
    std::size_t p = h.pivots[i];
    if (h.H(i, p) <= 0) return false;
    for (std::size_t j = 0; j < p; ++j)
      if (h.H(i, j) != 0) return false;
    for (std::size_t a = 0; a < i; ++a)
      if (h.H(a, p) < 0 || h.H(a, p) >= h.H(i, p)) return false;
    if (i > 0 && h.pivots[i - 1] >= p) return false;
  }
  for (std::size_t i = h.rank(); i < h.H.rows(); ++i)
    for (std::size_t j = 0; j < h.H.cols(); ++j)
      if (h.H(i, j) != 0) return false;
  return true;
}

// all integer combinations of the rows with coefficients in [-b, b]
std::vector<QVector> brute_points(const std::vector<QVector>& rows, int b) {
  std::vector<QVector> out;
  const std::size_t n = rows.size(), k = rows.empty() ? 0 : rows[0].size();
  std::vector<int> c(n, -b);
  for (;;) {
    QVector v = zero_vector(k);
    for (std::size_t i = 0; i < n; ++i) axpy(v, Rational(c[i]), rows[i]);
    out.push_back(v);
    std::size_t i = 0;
    while (i < n && c[i] == b) c[i++] = -b;
    if (i == n) break;
    ++c[i];
  }
  return out;
}

}  // namespace

TEST_CASE("hermite form with transform on random integer matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    ZMatrix m = random_matrix(rng, r, c, -6, 6);
    HermiteForm h = hermite_form(m);
    CHECK(h.U * m == h.H);
    CHECK(abs(integer_determinant(h.U)) == 1);
    CHECK(is_hnf(h));
    CHECK(h.rank() == rank(to_rational(m)));
  }
}

TEST_CASE("smith form diagonalizes with divisibility chain") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    ZMatrix m = random_matrix(rng, r, c, -9, 9);
    SmithForm s = smith_form(m);
    ZMatrix d = s.U * m * s.V;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        if (i == j && i < s.rank())
          CHECK(d(i, j) == s.diagonal[i]);
        else
          CHECK(d(i, j) == 0);
      }
    for (std::size_t i = 0; i + 1 < s.rank(); ++i) CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
    CHECK(abs(integer_determinant(s.U)) == 1);
    CHECK(abs(integer_determinant(s.V)) == 1);
    if (r == c && s.rank() == r) {
      Integer prod = 1;
      for (auto& x : s.diagonal) prod *= x;
      CHECK(prod == abs(integer_determinant(m)));
    }
  }
}

TEST_CASE("integer left kernel annihilates and is saturated") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t r = 2 + rng() % 4, c = 1 + rng() % 3;
    ZMatrix m = random_matrix(rng, r, c, -5, 5);
    ZMatrix k = integer_left_kernel(m);
    CHECK(k.rows() == r - rank(to_rational(m)));
    ZMatrix z = k * m;
    for (std::size_t i = 0; i < z.rows(); ++i)
      for (std::size_t j = 0; j < z.cols(); ++j) CHECK(z(i, j) == 0);
    // saturated: the kernel lattice has trivial elementary divisors
    if (k.rows()) {
      for (auto& d : smith_form(k).diagonal) CHECK(d == 1);
    }
  }
}

TEST_CASE("hnf_lattice canonical form and index example") {
  Lattice a = Lattice::span(2, {qv({1, 0}), qv({1, 2})});
  CHECK(a.denominator() == 1);
  CHECK(a.numerators() == ZMatrix::from_rows({{1, 0}, {0, 2}}, 2));
  CHECK(lattice_index(Lattice::standard(2), a) == 2);
  Lattice b = Lattice::span(2, {qv({make_rational(1, 2), 0}), qv({0, make_rational(1, 3)}),
                                qv({1, 1})});
  CHECK(b.denominator() == 6);
  CHECK(b.numerators() == ZMatrix::from_rows({{3, 0}, {0, 2}}, 2));
  // permuted and redundant generators give the identical representation
  Lattice c = Lattice::span(2, {qv({2, 2}), qv({0, make_rational(1, 3)}), qv({1, 1}),
                                qv({make_rational(-1, 2), 0})});
  CHECK(b == c);
  // a common factor is absorbed into the denominator
  Lattice d = Lattice::from_numerators(2, 4, ZMatrix::from_rows({{2, 0}, {0, 6}}, 2));
  CHECK(d.denominator() == 2);
  CHECK(d.numerators() == ZMatrix::from_rows({{1, 0}, {0, 3}}, 2));
}

TEST_CASE("membership agrees with brute-force enumeration") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> den(1, 3), num(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<QVector> gens;
    for (int g = 0; g < 2; ++g) gens.push_back(qv({make_rational(num(rng), den(rng)),
                                                    make_rational(num(rng), den(rng))}));
    Lattice L = Lattice::span(2, gens);
    auto pts = brute_points(gens, 3);
    for (const auto& p : pts) CHECK(L.contains(p));
    // a vector not in the lattice: halve a basis vector if the result is new
    if (L.rank() > 0) {
      QVector half = scale(Rational(1, 2), L.basis_vector(0));
      CHECK_FALSE(L.contains(half));
    }
    for (const auto& p : pts) {
      auto co = L.coordinates(p);
      REQUIRE(co);
      QVector back = zero_vector(2);
      for (std::size_t i = 0; i < L.rank(); ++i) axpy(back, Rational((*co)[i]), L.basis_vector(i));
      CHECK(back == p);
    }
  }
}

TEST_CASE("sum and intersection against enumeration") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> num(-4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<QVector> ga, gb;
    for (int g = 0; g < 2; ++g) {
      ga.push_back(qv({num(rng), num(rng)}));
      gb.push_back(qv({make_rational(num(rng), 2), num(rng)}));
    }
    Lattice A = Lattice::span(2, ga), B = Lattice::span(2, gb);
    Lattice S = lattice_sum(A, B), I = lattice_intersection(A, B);
    CHECK(is_sublattice(A, S));
    CHECK(is_sublattice(B, S));
    CHECK(is_sublattice(I, A));
    CHECK(is_sublattice(I, B));
    // every small point lying in both lies in the intersection
    for (int x = -12; x <= 12; ++x)
      for (int y2 = -24; y2 <= 24; ++y2) {
        QVector p = qv({make_rational(y2, 2), x});
        if (A.contains(p) && B.contains(p)) CHECK(I.contains(p));
      }
    if (A.full_rank() && B.full_rank()) {
      // [S : A][A : I] == [S : B][B : I]
      CHECK(lattice_index(S, A) * lattice_index(A, I) == lattice_index(S, B) * lattice_index(B, I));
      // index oracle: ratio of covolumes
      Rational ratio = abs(determinant(I.basis_matrix()) / determinant(S.basis_matrix()));
      CHECK(ratio == Rational(lattice_index(S, I)));
    }
  }
}

TEST_CASE("index errors and dimension mismatch") {
  Lattice a = Lattice::standard(2);
  Lattice b = Lattice::span(2, {qv({1, 0})});
  CHECK_THROWS_AS(lattice_index(a, b), InvalidInput);
  CHECK_THROWS_AS(lattice_sum(a, Lattice::standard(3)), DimensionMismatch);
  Lattice half = Lattice::span(2, {qv({make_rational(1, 2), 0}), qv({0, 1})});
  CHECK_THROWS_AS(lattice_index(a, half), InvalidInput);
}

TEST_CASE("intersection with a subspace") {
  Lattice L = Lattice::span(3, {qv({1, 0, 0}), qv({0, 1, 0}), qv({make_rational(1, 2),
                                                                  make_rational(1, 2),
                                                                  make_rational(1, 2)})});
  Lattice M = intersect_subspace(L, {qv({1, 1, 0}), qv({0, 0, 1})});
  CHECK(M.rank() == 2);
  CHECK(M.contains(qv({make_rational(1, 2), make_rational(1, 2), make_rational(1, 2)})));
  CHECK(M.contains(qv({1, 1, 0})));
  CHECK_FALSE(M.contains(qv({make_rational(1, 2), make_rational(1, 2), 0})));
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/6") == make_rational(1, 2));
  CHECK(parse_rational("-4") == -4);
  CHECK(to_string(parse_rational("-10/5")) == "-2");
  CHECK_THROWS_AS(parse_rational("10/-5"), InvalidInput);
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidInput);
}
