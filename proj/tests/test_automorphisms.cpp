#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "nilcsp/automorphism.hpp"
#include "nilcsp/free_nilpotent.hpp"

using namespace nilcsp;

namespace {

LatticeGroupPtr heisenberg_hull() {
  auto H = std::make_shared<const LieAlgebra>(LieAlgebra::heisenberg());
  return std::make_shared<const LatticeGroup>(
      lattice_hull(GenGroup{H, {unit_vector(3, 0), unit_vector(3, 1), unit_vector(3, 2)}, true}));
}

LatticeGroupPtr free_hull(std::size_t n, unsigned c) {
  return std::make_shared<const LatticeGroup>(lattice_hull(FreeNilpotent(n, c).psi_malcev()));
}

QMatrix qm(std::vector<std::vector<Rational>> rows) {
  QMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

QMatrix heis_family(Rational a, Rational b) { return qm({{1, 0, a}, {0, 1, b}, {0, 0, 1}}); }

std::vector<std::int64_t> reduce(const ZMatrix& A, const IaSystem& sys, std::int64_t s) {
  auto v = sys.values_of(A);
  for (auto& x : v) x = mod_i64(x, s);
  return v;
}

// Order of the subgroup generated by the given residue points, growing the
// generating list only with elements not already reached.
std::size_t generated_order(const IaSystem& sys, const std::set<std::vector<std::int64_t>>& gens,
                            std::int64_t s) {
  const std::size_t k = sys.dim();
  auto mul = [&](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    auto A = sys.dense(a), B = sys.dense(b);
    std::vector<std::int64_t> C(k * k, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t l = 0; l < k; ++l)
        for (std::size_t j = 0; j < k; ++j) C[i * k + j] += A[i * k + l] * B[l * k + j];
    std::vector<std::int64_t> out;
    for (const auto& u : sys.unknowns()) out.push_back(mod_i64(C[u.row * k + u.col], s));
    return out;
  };
  std::vector<std::vector<std::int64_t>> used;
  std::set<std::vector<std::int64_t>> seen{std::vector<std::int64_t>(sys.unknowns().size(), 0)};
  for (const auto& g : gens) {
    if (seen.count(g)) continue;
    used.push_back(g);
    std::vector<std::vector<std::int64_t>> todo(seen.begin(), seen.end());
    while (!todo.empty()) {
      auto x = todo.back();
      todo.pop_back();
      for (const auto& h : used) {
        auto y = mul(x, h);
        if (seen.insert(y).second) todo.push_back(y);
      }
    }
  }
  return seen.size();
}

}  // namespace

TEST_CASE("heisenberg hull basis has [b0,b1] = 2 b2") {
  auto d = heisenberg_hull();
  CHECK(d->basis()[2] == QVector{0, 0, Rational(1, 2)});
  CHECK(d->basis_algebra()->structure(0, 1) == QVector{0, 0, 2});
}

TEST_CASE("is_lie_aut") {
  auto d = heisenberg_hull();
  const LieAlgebra& B = *d->basis_algebra();
  CHECK(is_lie_aut(B, QMatrix::identity(3)).ok);
  for (Rational a : {Rational(0), Rational(1), Rational(-3, 2), Rational(7, 5)})
    for (Rational b : {Rational(0), Rational(2), Rational(1, 3)}) CHECK(is_lie_aut(B, heis_family(a, b)).ok);
  auto swap13 = qm({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
  auto r = is_lie_aut(B, swap13);
  CHECK_FALSE(r.ok);
  REQUIRE(r.witness);
  CHECK(*r.witness == std::make_pair(std::size_t(0), std::size_t(1)));
  CHECK_THROWS_AS(is_lie_aut(B, qm({{1, 0, 0}, {1, 0, 0}, {0, 0, 1}})), InvalidInput);
  CHECK_THROWS_AS(is_lie_aut(B, QMatrix::identity(2)), DimensionMismatch);
}

TEST_CASE("stabilizes_lattice and is_ia_star on the heisenberg hull") {
  auto d = heisenberg_hull();
  Lattice Z = Lattice::standard(3);
  CHECK(stabilizes_lattice(QMatrix::identity(3), Z));
  CHECK(stabilizes_lattice(heis_family(1, 0), Z));
  CHECK_FALSE(stabilizes_lattice(heis_family(Rational(1, 2), 0), Z));
  // same test in ambient coordinates against the hull lattice
  CHECK(stabilizes_lattice(from_basis_matrix(*d, heis_family(1, 0)), d->lattice()));
  CHECK_FALSE(stabilizes_lattice(from_basis_matrix(*d, heis_family(Rational(1, 2), 0)), d->lattice()));
  CHECK(to_basis_matrix(*d, from_basis_matrix(*d, heis_family(3, -2))) == heis_family(3, -2));

  CHECK(is_ia_star(*d, QMatrix::identity(3)));
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) CHECK(is_ia_star(*d, heis_family(a, b)));
  std::string why;
  CHECK_FALSE(is_ia_star(*d, heis_family(Rational(1, 2), 0), &why));
  CHECK(why == "does not stabilize the lattice");
  auto flip = qm({{-1, 0, 0}, {0, 1, 0}, {0, 0, -1}});
  CHECK(is_lie_aut(*d->basis_algebra(), flip).ok);
  CHECK_FALSE(is_ia_star(*d, flip));
}

TEST_CASE("aut_star_image") {
  auto d = heisenberg_hull();
  CHECK(aut_star_image(*d, QMatrix::identity(3)) == ZMatrix::identity(2));
  CHECK(aut_star_image(*d, heis_family(2, -1)) == ZMatrix::identity(2));
  auto swap = qm({{0, 1, 0}, {1, 0, 0}, {0, 0, -1}});
  CHECK(is_lie_aut(*d->basis_algebra(), swap).ok);
  CHECK(stabilizes_lattice(swap, Lattice::standard(3)));
  ZMatrix perm(2, 2);
  perm(0, 1) = 1;
  perm(1, 0) = 1;
  CHECK(aut_star_image(*d, swap) == perm);
  // multiplicative on a few Lie automorphisms that mix the first layer
  auto shear = qm({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
  REQUIRE(is_lie_aut(*d->basis_algebra(), shear).ok);
  std::vector<QMatrix> ms{swap, shear, heis_family(1, 2), shear * swap};
  for (const auto& a : ms)
    for (const auto& b : ms) CHECK(aut_star_image(*d, a * b) == aut_star_image(*d, a) * aut_star_image(*d, b));
}

TEST_CASE("ia_rank") {
  CHECK(ia_rank(LieAlgebra::abelian(3)) == 0);
  CHECK(ia_rank(LieAlgebra::heisenberg()) == 2);
  CHECK(ia_rank(*FreeNilpotent(2, 3).algebra()) == 6);
  CHECK(ia_rank(*FreeNilpotent(3, 2).algebra()) == 9);
  CHECK(ia_rank(*FreeNilpotent(2, 4).algebra()) == 2 * (8 - 2));
}

TEST_CASE("enumerate_ia_star on the heisenberg hull") {
  IaSystem sys(heisenberg_hull());
  auto all = enumerate_ia_star(sys, 3);
  REQUIRE(all.size() == 49);
  std::set<std::pair<long, long>> ab;
  for (const auto& A : all) {
    CHECK(A(0, 1) == 0);
    ab.emplace(A(0, 2).get_si(), A(1, 2).get_si());
  }
  CHECK(ab.size() == 49);
  CHECK(ab.begin()->first == -3);
  CHECK(ab.rbegin()->second == 3);
  std::set<std::vector<long>> in;
  auto key = [](const ZMatrix& M) {
    std::vector<long> v;
    for (std::size_t i = 0; i < M.rows(); ++i)
      for (std::size_t j = 0; j < M.cols(); ++j) v.push_back(M(i, j).get_si());
    return v;
  };
  for (const auto& A : all) in.insert(key(A));
  auto in_bound = [](const ZMatrix& M) {
    for (std::size_t i = 0; i < M.rows(); ++i)
      for (std::size_t j = 0; j < M.cols(); ++j)
        if (abs(M(i, j)) > 3) return false;
    return true;
  };
  for (const auto& A : all) {
    ZMatrix Ai = to_integer(inverse(to_rational(A)));
    CHECK(in.count(key(Ai)) == 1);
    for (const auto& B : all) {
      ZMatrix P = A * B;
      if (in_bound(P)) CHECK(in.count(key(P)) == 1);
    }
  }
}

TEST_CASE("enumerate_ia_star on abelian groups is trivial") {
  auto A = std::make_shared<const LieAlgebra>(LieAlgebra::abelian(3));
  auto d = std::make_shared<const LatticeGroup>(
      lattice_hull(GenGroup{A, {unit_vector(3, 0), unit_vector(3, 1), unit_vector(3, 2)}, true}));
  IaSystem sys(d);
  auto all = enumerate_ia_star(sys, 4);
  REQUIRE(all.size() == 1);
  CHECK(all[0] == ZMatrix::identity(3));
}

TEST_CASE("enumerate_ia_star matches brute force on the free (2,3) hull") {
  auto d = free_hull(2, 3);
  IaSystem sys(d);
  auto all = enumerate_ia_star(sys, 1);
  // brute force over every unitriangular matrix with identity first-layer
  // block and entries in [-1, 1]
  const std::size_t k = d->dim(), dd = d->abelian_rank();
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = std::max(i + 1, dd); j < k; ++j) slots.emplace_back(i, j);
  std::size_t brute = 0;
  std::vector<int> v(slots.size(), -1);
  for (;;) {
    QMatrix A = QMatrix::identity(k);
    for (std::size_t t = 0; t < slots.size(); ++t) A(slots[t].first, slots[t].second) = v[t];
    if (is_ia_star(*d, A)) ++brute;
    std::size_t t = 0;
    while (t < v.size() && v[t] == 1) v[t++] = -1;
    if (t == v.size()) break;
    ++v[t];
  }
  CHECK(all.size() == brute);
  CHECK(brute > 1);
  // closure under product when in bounds
  std::set<std::vector<long>> in;
  for (const auto& A : all) {
    auto v = sys.values_of(A);
    in.insert(std::vector<long>(v.begin(), v.end()));
  }
  std::size_t checked = 0;
  for (const auto& A : all)
    for (const auto& B : all) {
      auto pv = sys.values_of(A * B);
      bool bounded = std::all_of(pv.begin(), pv.end(), [](std::int64_t x) { return x >= -1 && x <= 1; });
      if (!bounded) continue;
      ++checked;
      CHECK(in.count(std::vector<long>(pv.begin(), pv.end())) == 1);
    }
  CHECK(checked > all.size());
}

TEST_CASE("enumeration caps") {
  IaSystem sys(free_hull(2, 3));
  EnumerateOptions o;
  o.cap = 10;
  CHECK_THROWS_AS(enumerate_ia_star(sys, 1, o), CapExceeded);
  o = {};
  o.max_dim = 4;
  CHECK_THROWS_AS(enumerate_ia_star(sys, 1, o), CapExceeded);
  CHECK_THROWS_AS(enumerate_ia_star(sys, -1), InvalidInput);
}

TEST_CASE("strong approximation on the heisenberg hull") {
  IaSystem sys(heisenberg_hull());
  for (std::int64_t m = 1; m <= 8; ++m) {
    StrongApproxOptions o;
    o.keep_lifts = true;
    auto r = strong_approx_check(sys, m, o);
    CHECK(r.status == CheckStatus::pass);
    CHECK(r.scale == m);
    CHECK(r.points == static_cast<std::size_t>(m * m));
    CHECK(r.lifted == r.points);
    for (const auto& [res, lift] : r.lifts)
      for (std::size_t i = 0; i < res.size(); ++i) CHECK(mod_i64(lift[i], r.scale) == res[i]);
  }
}

TEST_CASE("strong approximation on the free (2,3) hull agrees with reductions of IA*") {
  IaSystem sys(free_hull(2, 3));
  // entries up to 3 are needed: A[0][2] = 1 forces A[2][3] = 3
  auto box = enumerate_ia_star(sys, 3);
  for (std::int64_t m = 2; m <= 4; ++m) {
    auto r = strong_approx_check(sys, m);
    CHECK(r.status == CheckStatus::pass);
    CHECK(r.lifted == r.points);
    // independent count: the subgroup of (Z/s)^{k x k} generated by the
    // reductions of integer IA* elements is contained in the image
    std::set<std::vector<std::int64_t>> gens;
    for (const auto& A : box) gens.insert(reduce(A, sys, r.scale));
    CHECK(generated_order(sys, gens, r.scale) == r.points);
    std::size_t expected = 1;
    for (int i = 0; i < 6; ++i) expected *= static_cast<std::size_t>(m);
    CHECK(r.points == expected);
  }
}

TEST_CASE("solutions of the Lie equations alone need not lift") {
  IaSystem sys(free_hull(2, 3));
  const std::int64_t s = 2;
  std::set<std::vector<std::int64_t>> group_pts, naive_pts;
  IaSystem::ModOptions with;
  sys.enumerate_mod(s, with, [&](const auto& v) { group_pts.insert(v); });
  IaSystem::ModOptions without;
  without.group_law = false;
  sys.enumerate_mod(s, without, [&](const auto& v) { naive_pts.insert(v); });
  REQUIRE(naive_pts.size() > group_pts.size());
  CHECK(std::includes(naive_pts.begin(), naive_pts.end(), group_pts.begin(), group_pts.end()));
  std::set<std::vector<std::int64_t>> red;
  for (const auto& A : enumerate_ia_star(sys, 2)) red.insert(reduce(A, sys, s));
  std::size_t spurious = 0;
  for (const auto& p : naive_pts) {
    if (group_pts.count(p)) continue;
    ++spurious;
    CHECK(red.count(p) == 0);
    CHECK(sys.lift(p, s, {}).status != IaSystem::LiftStatus::lifted);
  }
  CHECK(spurious == naive_pts.size() - group_pts.size());
}

TEST_CASE("random lifts of the identity lie in the congruence kernel") {
  IaSystem sys(free_hull(2, 3));
  std::mt19937_64 rng(3);
  std::vector<std::int64_t> zero(sys.unknowns().size(), 0);
  std::size_t found = 0;
  for (int i = 0; i < 50; ++i) {
    auto v = random_lift(sys, zero, 4, rng);
    if (!v) continue;
    ++found;
    CHECK(is_ia_star(sys.delta(), to_rational(sys.matrix(*v))));
    for (auto x : *v) CHECK(mod_i64(x, 4) == 0);
  }
  CHECK(found > 10);
}

TEST_CASE("csp witnesses on the heisenberg hull") {
  IaSystem sys(heisenberg_hull());
  auto M = [](long a, long b) { return to_integer(heis_family(a, b)); };
  auto full = csp_witness(sys, {M(1, 0), M(0, 1)}, 1, 16);
  CHECK(full.status == CheckStatus::pass);
  CHECK(full.m == 1);
  auto h1 = csp_witness(sys, {M(2, 0), M(0, 1)}, 2, 16);
  CHECK(h1.status == CheckStatus::pass);
  CHECK(h1.m == 2);
  CHECK(h1.group_order == 4);
  CHECK(h1.image_order == 2);
  auto h2 = csp_witness(sys, {M(1, 1), M(0, 2)}, 2, 16);
  CHECK(h2.m == 2);
  auto h3 = csp_witness(sys, {M(3, 0), M(0, 5)}, 15, 16);
  CHECK(h3.m == 15);
  // wrong index: never certified
  auto bad = csp_witness(sys, {M(2, 0), M(0, 1)}, 3, 8);
  CHECK(bad.status == CheckStatus::inconclusive);
  CHECK_THROWS_AS(csp_witness(sys, {to_integer(qm({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}))}, 1, 4), InvalidInput);
}
