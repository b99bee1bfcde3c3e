#include <random>

#include "doctest.h"
#include "nilcsp/lie.hpp"

using namespace nilcsp;

namespace {

Rational random_entry(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 4);
  return make_rational(num(rng), den(rng));
}

QVector random_upper(std::mt19937_64& rng, std::size_t n) {
  QVector v(n * (n - 1) / 2);
  for (auto& x : v) x = random_entry(rng);
  return v;
}

}  // namespace

TEST_CASE("heisenberg bch example") {
  LieAlgebra H = LieAlgebra::heisenberg();
  QVector z = bch(H, {1, 0, 0}, {0, 1, 0});
  CHECK(z == QVector{1, 1, make_rational(1, 2)});
}

TEST_CASE("bch series low-order coefficients") {
  BchSeries s(3);
  // Z_2 = (1/2)[x,y], Z_3 = (1/12)[x,[x,y]] - (1/12)[y,[x,y]] in right-normed form
  // Check by evaluation in the free class-3 setting via 4x4 unitriangular matrices.
  LieAlgebra T = LieAlgebra::strictly_upper(4);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    QVector x = random_upper(rng, 4), y = random_upper(rng, 4);
    QVector xy = T.bracket(x, y);
    QVector expect = add(x, y);
    axpy(expect, make_rational(1, 2), xy);
    axpy(expect, make_rational(1, 12), T.bracket(x, xy));
    axpy(expect, make_rational(-1, 12), T.bracket(y, xy));
    CHECK(bch(T, x, y) == expect);
  }
}

TEST_CASE("bch agrees with the matrix exponential oracle") {
  std::mt19937_64 rng(42);
  for (std::size_t n : {3, 4, 5, 6}) {
    LieAlgebra T = LieAlgebra::strictly_upper(n);
    for (int trial = 0; trial < 15; ++trial) {
      QVector x = random_upper(rng, n), y = random_upper(rng, n);
      QMatrix prod = matrix_exp(upper_from_coords(n, x)) * matrix_exp(upper_from_coords(n, y));
      CHECK(bch(T, x, y) == coords_from_upper(matrix_log(prod)));
    }
  }
}

TEST_CASE("exp and log are mutually inverse") {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      QMatrix N = upper_from_coords(n, random_upper(rng, n));
      CHECK(matrix_log(matrix_exp(N)) == N);
      QMatrix U = matrix_exp(N);
      CHECK(matrix_exp(matrix_log(U)) == U);
    }
  QMatrix bad = QMatrix::identity(2).scaled(2);
  CHECK_THROWS_AS(matrix_log(bad), InvalidInput);
  CHECK_THROWS_AS(matrix_exp(QMatrix::identity(2)), InvalidInput);
}

TEST_CASE("group axioms through bch") {
  auto T = std::make_shared<const LieAlgebra>(LieAlgebra::strictly_upper(4));
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    GroupElement a{T, random_upper(rng, 4)}, b{T, random_upper(rng, 4)}, c{T, random_upper(rng, 4)};
    CHECK(group_mul(group_mul(a, b), c).log == group_mul(a, group_mul(b, c)).log);
    CHECK(group_mul(a, group_inv(a)).log == zero_vector(6));
    CHECK(group_mul(group_pow(a, 2), group_pow(a, 3)).log == group_pow(a, 5).log);
  }
  auto H = std::make_shared<const LieAlgebra>(LieAlgebra::heisenberg());
  GroupElement x{H, {1, 0, 0}}, y{H, {0, 1, 0}};
  CHECK(group_commutator(x, y).log == QVector{0, 0, 1});
  CHECK_THROWS_AS(group_mul(x, GroupElement{T, zero_vector(6)}), InvalidInput);
}

TEST_CASE("validate_algebra") {
  auto rep = validate_algebra(LieAlgebra::heisenberg());
  CHECK(rep.valid);
  CHECK(rep.computed_class == 2);
  CHECK(validate_algebra(LieAlgebra::strictly_upper(5)).computed_class == 4);
  CHECK(validate_algebra(LieAlgebra::abelian(3)).computed_class == 1);
  // [b0,b1] = b2, [b0,b2] = b3, [b1,b2] = b3 : Jacobi on (0,1,2) holds trivially here,
  // so break it with [b1,b3] = b0-free junk on a 4-dim table
  auto bad = LieAlgebra::from_brackets(4, 3, {{0, 1, {0, 0, 1, 0}}, {1, 2, {0, 0, 0, 1}},
                                              {0, 3, {0, 0, 0, 1}}});
  auto r2 = validate_algebra(bad);
  CHECK_FALSE(r2.valid);
  bool found = false;
  for (auto& v : r2.violations) found |= v.find("Jacobi") != std::string::npos;
  CHECK(found);
  // non-nilpotent: [b0, b1] = b1
  auto affine = LieAlgebra::from_brackets(2, 2, {{0, 1, {0, 1}}});
  CHECK_FALSE(validate_algebra(affine).valid);
  // asymmetric raw table
  std::vector<QVector> t(4, zero_vector(2));
  t[1] = {1, 0};
  CHECK_FALSE(validate_algebra(LieAlgebra(2, 1, t)).valid);
  // wrong declared class
  CHECK_FALSE(validate_algebra(LieAlgebra::from_brackets(3, 3, {{0, 1, {0, 0, 1}}})).valid);
}

TEST_CASE("lower central series and lie span") {
  auto T = LieAlgebra::strictly_upper(4);
  auto lcs = lower_central_series(T);
  REQUIRE(lcs.size() == 3);
  CHECK(lcs[0].size() == 6);
  CHECK(lcs[1].size() == 3);
  CHECK(lcs[2].size() == 1);
  // E01 and E12 and E23 generate everything
  auto span = lie_span(T, {unit_vector(6, 0), unit_vector(6, 3), unit_vector(6, 5)});
  CHECK(span.size() == 6);
  auto s2 = lie_span(T, {unit_vector(6, 0), unit_vector(6, 5)});
  CHECK(s2.size() == 2);
}

TEST_CASE("change of basis preserves brackets") {
  auto H = LieAlgebra::heisenberg();
  QMatrix P = QMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 2}}, 3);
  auto H2 = H.change_basis(P);
  // new [c0, c1] = [b0 + b1, b1] = b2 = (1/2) c2
  CHECK(H2.structure(0, 1) == QVector{0, 0, make_rational(1, 2)});
  CHECK(validate_algebra(H2).valid);
}
