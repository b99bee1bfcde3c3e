#include <random>
#include <set>

#include "doctest.h"
#include "nilcsp/automorphism.hpp"
#include "nilcsp/free_nilpotent.hpp"
#include "nilcsp/ia_system.hpp"

using namespace nilcsp;

namespace {

QVector central(const FreeNilpotent& f, std::vector<long> coeffs) {
  QVector v = zero_vector(f.dim());
  auto top = f.top_layer();
  for (std::size_t i = 0; i < top.size(); ++i) v[top[i]] = coeffs[i];
  return v;
}

}  // namespace

TEST_CASE("hall bases") {
  FreeNilpotent f22(2, 2);
  REQUIRE(f22.dim() == 3);
  CHECK(f22.label(0) == "x1");
  CHECK(f22.label(2) == "[x2,x1]");
  // [x1, x2] = -h with h = [x2, x1]
  CHECK(f22.algebra()->structure(0, 1) == QVector{0, 0, -1});
  FreeNilpotent f23(2, 3);
  CHECK(f23.dim() == 5);
  CHECK(f23.label(3) == "[[x2,x1],x1]");
  CHECK(f23.label(4) == "[[x2,x1],x2]");
  CHECK(FreeNilpotent(3, 2).dim() == 6);
  CHECK(validate_algebra(*FreeNilpotent(3, 1).algebra()).valid);
  CHECK(FreeNilpotent(3, 1).algebra()->nonzero_brackets().empty());
  // class c is a truncation of class c+1
  FreeNilpotent f24(2, 4);
  for (std::size_t i = 0; i < f23.dim(); ++i)
    for (std::size_t j = 0; j < f23.dim(); ++j) {
      QVector up = f24.algebra()->structure(i, j);
      CHECK(QVector(up.begin(), up.begin() + 5) == f23.algebra()->structure(i, j));
    }
  CHECK_THROWS_AS(FreeNilpotent(0, 2), InvalidInput);
}

TEST_CASE("centers") {
  FreeNilpotent f11(2, 1);
  auto c1 = center(f11, lattice_hull(f11.psi_malcev()));
  CHECK(c1.algebra_center.size() == 2);
  CHECK(c1.group_center == Lattice::standard(2));

  FreeNilpotent f22(2, 2);
  auto c2 = center(f22, lattice_hull(f22.psi_malcev()));
  CHECK(c2.group_center == Lattice::span(3, {unit_vector(3, 2)}));
  CHECK(c2.hull_center == Lattice::span(3, {{0, 0, make_rational(1, 2)}}));

  for (auto [n, c] : {std::pair<std::size_t, unsigned>{2, 3}, {3, 2}, {2, 4}}) {
    FreeNilpotent f(n, c);
    auto cd = center(f, lattice_hull(f.psi_malcev()));
    CHECK(cd.algebra_center.size() == witt_dimension(n, c));
    CHECK(cd.group_center.rank() == witt_dimension(n, c));
  }
}

TEST_CASE("A(Psi) and the center tuples") {
  FreeNilpotent f(2, 3);
  std::vector<QVector> zero(2, zero_vector(5));
  CHECK(a_backward(f, zero) == QMatrix::identity(5));
  CHECK(a_forward(f, QMatrix::identity(5)) == zero);
  // non-central and non-integral tuples
  CHECK_THROWS_AS(a_backward(f, {unit_vector(5, 2), zero_vector(5)}), InvalidInput);
  CHECK_THROWS_AS(a_backward(f, {scale(make_rational(1, 2), unit_vector(5, 3)), zero_vector(5)}),
                  InvalidInput);
  QMatrix shear = QMatrix::identity(5);
  shear(0, 2) = 1;
  CHECK_THROWS_AS(a_forward(f, shear), InvalidInput);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-4, 4);
  auto random_tuple = [&] {
    return std::vector<QVector>{central(f, {d(rng), d(rng)}), central(f, {d(rng), d(rng)})};
  };
  for (int trial = 0; trial < 50; ++trial) {
    auto u = random_tuple(), v = random_tuple();
    QMatrix alpha = a_backward(f, u), beta = a_backward(f, v);
    CHECK(a_forward(f, alpha) == u);
    CHECK(a_backward(f, a_forward(f, alpha)) == alpha);
    // (beta o alpha)(x_i) = x_i v_i u_i
    auto w = a_forward(f, alpha * beta);
    for (std::size_t i = 0; i < 2; ++i) CHECK(w[i] == add(u[i], v[i]));
  }
}

TEST_CASE("A(Psi_{2,2}) matches the even part of IA*") {
  FreeNilpotent f(2, 2);
  auto hull = std::make_shared<const LatticeGroup>(lattice_hull(f.psi_malcev()));
  std::set<std::pair<long, long>> from_tuples;
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b) {
      QMatrix A = a_backward(f, {central(f, {a}), central(f, {b})});
      QMatrix B = to_basis_matrix(*hull, A);
      CHECK(is_ia_star(*hull, B));
      REQUIRE(is_integral(B));
      from_tuples.insert({B(0, 2).get_num().get_si(), B(1, 2).get_num().get_si()});
    }
  CHECK(from_tuples.size() == 25);
  IaSystem sys(hull);
  std::set<std::pair<long, long>> from_ia;
  for (const auto& Z : enumerate_ia_star(sys, 4)) {
    QMatrix A = from_basis_matrix(*hull, to_rational(Z));
    bool in_a = true;
    try {
      a_forward(f, A);
    } catch (const InvalidInput&) {
      in_a = false;
    }
    CHECK(in_a == (Z(0, 2) % 2 == 0 && Z(1, 2) % 2 == 0));
    if (in_a) from_ia.insert({Z(0, 2).get_si(), Z(1, 2).get_si()});
  }
  CHECK(from_ia == from_tuples);
}

TEST_CASE("aut_restriction is a section") {
  FreeNilpotent f22(2, 2), f23(2, 3), f34(3, 4), f33(3, 3);
  auto id = aut_restriction(f22, f23, {{{0, 1}}, {{1, 1}}});
  CHECK(id.lie == QMatrix::identity(5));
  CHECK(id.restricts);
  auto t = aut_restriction(f22, f23, {{{0, 1}, {1, 1}}, {{1, 1}}});
  CHECK(t.restricts);
  CHECK(is_lie_aut(*f23.algebra(), t.lie).ok);
  auto swap = aut_restriction(f22, f23, {{{1, 1}}, {{0, 1}}});
  CHECK(swap.restricts);
  CHECK(swap.lie(0, 1) == 1);
  CHECK(swap.lie(1, 0) == 1);
  CHECK(abelianized_matrix(2, {{{1, 1}}, {{0, 1}}}) == ZMatrix::from_rows({{0, 1}, {1, 0}}, 2));
  auto longer = aut_restriction(f33, f34, {{{0, 1}, {1, -2}, {0, 1}, {2, 1}, {0, -1}}, {{1, 1}, {2, 3}, {1, 1}, {1, -1}, {2, -3}}, {{2, 1}, {0, 1}, {2, -1}}});
  CHECK(longer.restricts);
  CHECK_THROWS_AS(aut_restriction(f22, f23, {{{0, 2}}, {{1, 1}}}), InvalidInput);
  CHECK_THROWS_AS(aut_restriction(f22, f34, {{{0, 1}}, {{1, 1}}}), InvalidInput);
}
