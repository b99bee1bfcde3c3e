#include <algorithm>

#include "doctest.h"
#include "nilcsp/automorphism.hpp"
#include "nilcsp/catalog.hpp"

using namespace nilcsp;

namespace {

std::shared_ptr<const FiberGroup> entry(const std::string& name) {
  for (const auto& e : torsion_catalog())
    if (e.name == name) return e.group;
  throw Error("no catalog entry " + name);
}

FiberElement el(std::vector<long> x, Element y) {
  ZVector v;
  for (long a : x) v.push_back(Integer(a));
  return {v, y};
}

std::vector<Element> cyclic_map(std::size_t n, std::size_t mult) {
  std::vector<Element> out(n);
  for (std::size_t y = 0; y < n; ++y) out[y] = static_cast<Element>((y * mult) % n);
  return out;
}

ZMatrix scalar(long v) {
  ZMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("finite fiber products") {
  auto C = [](std::size_t n) { return FiniteGroup::cyclic(n); };
  auto direct = finite_fiber_product(C(2), C(3), {0, 0}, {0, 0, 0});
  CHECK(direct.group.order() == 6);
  // P2 = Q with the identity: the graph of pi1
  auto graph = finite_fiber_product(C(4), C(2), {0, 1, 0, 1}, {0, 1});
  CHECK(graph.group.order() == 4);
  std::vector<Element> pr1;
  for (auto [a, b] : graph.pairs) pr1.push_back(a);
  CHECK(is_bijective(pr1, 4));
  CHECK(check_group_axioms(graph.group, 0).ok);
  CHECK_THROWS_AS(finite_fiber_product(C(2), C(3), {0, 1}, {0, 0, 0}), InvalidInput);
}

TEST_CASE("fiber group construction errors") {
  auto Z = integer_group(1);
  auto C = [](std::size_t n) { return FiniteGroup::cyclic(n); };
  // pi2 not surjective
  CHECK_THROWS_AS(FiberGroup(Z, C(4), C(2), {1}, {1}, {0}), InvalidInput);
  // pi2 not a homomorphism: Z/3 -> Z/2
  CHECK_THROWS_AS(FiberGroup(Z, C(3), C(2), {1}, {1}, {1}), InvalidInput);
  // pi1 not surjective
  CHECK_THROWS_AS(FiberGroup(Z, C(4), C(2), {0}, {1}, {1}), InvalidInput);
  CHECK_THROWS_AS(FiberGroup(Z, C(4), C(2), {1, 0}, {1}, {1}), DimensionMismatch);
}

TEST_CASE("z x_{z/2} z/4 is isomorphic to z x z/2") {
  auto u = entry("z-x-z2-z4");
  CHECK(u->contains(el({1}, 1)));
  CHECK(u->contains(el({1}, 3)));
  CHECK_FALSE(u->contains(el({1}, 2)));
  // (x, y) -> (x, (y - x) / 2 mod 2) on the mod-8 quotient
  FiberQuotient f(*u, 8);
  REQUIRE(f.order() == 16);
  FiniteGroup target = FiniteGroup::direct_product(FiniteGroup::cyclic(8), FiniteGroup::cyclic(2));
  std::vector<Element> phi(16);
  for (std::size_t a = 0; a < 16; ++a) {
    FiberElement g = f.representative(static_cast<Element>(a));
    long x = g.x[0].get_si(), y = g.y;
    long z = (((y - x) % 4) + 4) % 4;
    REQUIRE(z % 2 == 0);
    phi[a] = static_cast<Element>(((x % 8) + 8) % 8 + 8 * (z / 2));
  }
  CHECK(is_bijective(phi, 16));
  for (std::size_t a = 0; a < 16; ++a)
    for (std::size_t b = 0; b < 16; ++b)
      CHECK(phi[f.group().mul(a, b)] == target.mul(phi[a], phi[b]));
}

TEST_CASE("torsion subgroups") {
  CHECK(torsion_subgroup(*entry("z-x-z3")).group.order() == 3);
  auto t = torsion_subgroup(*entry("z-x-z2-z4"));
  CHECK(t.embedding == std::vector<Element>{0, 2});
  auto free = FiberGroup::direct(integer_group(2), FiniteGroup::cyclic(1));
  CHECK(torsion_subgroup(free).group.order() == 1);
  for (const auto& e : torsion_catalog()) CHECK(torsion_subgroup(*e.group).group.order() == e.expected_torsion);
}

TEST_CASE("find_t") {
  auto free = FiberGroup::direct(heisenberg_hull_group(), FiniteGroup::cyclic(1));
  CHECK(find_t(free, 10) == 1);
  CHECK(find_t(*entry("z-x-z2-z4"), 10) == 2);
  CHECK(find_t(*entry("z-x-z3"), 10) == 3);
  for (const auto& e : torsion_catalog()) {
    std::int64_t t = find_t(*e.group, 12);
    CHECK(t == e.expected_t);
    // literal condition in the quotient used
    FiberQuotient f(*e.group, level_scale(*e.group, t));
    auto power = power_subgroup(f.group(), t);
    for (auto x : f.torsion_image())
      if (x != f.group().identity()) CHECK_FALSE(power[x]);
  }
  CHECK_THROWS_AS(find_t(*entry("z-x-z2-s3"), 5), CapExceeded);
}

TEST_CASE("rho is a bijection exactly when t divides m") {
  auto u = entry("z-x-z3");
  for (std::int64_t m : {1, 2, 4, 5}) {
    auto r = check_rho(*u, m);
    CHECK_FALSE(r.injective);
    // torsion dies in G_m, so the image is still the full fiber product
    CHECK(r.surjective);
  }
  for (std::int64_t m : {3, 6}) {
    auto r = check_rho(*u, m);
    CHECK(r.injective);
    CHECK(r.surjective);
  }
  for (std::int64_t m : {2, 4, 6}) {
    auto r = check_rho(*entry("z-x-z2-z4"), m);
    CHECK(r.injective);
    CHECK(r.surjective);
  }
  auto r = check_rho(*entry("heisenberg-x-z3"), 3);
  CHECK(r.injective);
  CHECK(r.surjective);
  CHECK(r.gamma_m_order == 27 * 3);
}

TEST_CASE("lift_automorphism") {
  auto u = entry("z-x-z2-z4");
  auto idl = lift_automorphism(*u, scalar(1), cyclic_map(4, 1));
  REQUIRE(idl.aut);
  CHECK(idl.aut->apply(el({5}, 1)) == el({5}, 1));
  auto neg = lift_automorphism(*u, scalar(-1), cyclic_map(4, 3));
  REQUIRE(neg.aut);
  CHECK(neg.aut->apply(el({1}, 1)) == el({-1}, 3));
  CHECK(verify_on_quotient(*u, [&](const FiberElement& g) { return neg.aut->apply(g); }, 8).ok);
  CHECK(verify_projections(*u, *neg.aut, 8).ok);
  // induced maps on Q = Z/3 differ
  auto v = entry("z-x-z3-z9");
  auto bad = lift_automorphism(*v, scalar(1), cyclic_map(9, 2));
  CHECK_FALSE(bad.aut);
  REQUIRE(bad.witness);
  CHECK(*bad.witness != v->q().identity());
  CHECK(lift_automorphism(*v, scalar(-1), cyclic_map(9, 2)).aut);
  // not an automorphism of P2
  CHECK_FALSE(lift_automorphism(*u, scalar(1), cyclic_map(4, 2)).aut);
  CHECK_FALSE(lift_automorphism(*u, scalar(2), cyclic_map(4, 1)).aut);
}

TEST_CASE("kernel-preservation is required") {
  // P1 = Z^2 with pi1 reading the first coordinate; swapping coordinates moves ker pi1
  auto Z2 = integer_group(2);
  FiberGroup u(Z2, FiniteGroup::cyclic(2), FiniteGroup::cyclic(2), {1, 0}, {1}, {1});
  ZMatrix swap(2, 2);
  swap(0, 1) = swap(1, 0) = 1;
  auto r = lift_automorphism(u, swap, cyclic_map(2, 1));
  CHECK_FALSE(r.aut);
  CHECK(r.error == "sigma1 does not preserve ker pi1");
}

TEST_CASE("gamma_star_check") {
  auto free = FiberGroup::direct(heisenberg_hull_group(), FiniteGroup::cyclic(1));
  auto r0 = gamma_star_check(free);
  CHECK(r0.ok);
  CHECK(r0.d == 2);
  auto r1 = gamma_star_check(*entry("z-x-z2-z4"));
  CHECK(r1.ok);
  CHECK(r1.d == 1);
  auto r2 = gamma_star_check(*entry("heisenberg-x-z3"));
  CHECK(r2.ok);
  CHECK(r2.free_rank == 2);
  // the commutator of the first-layer lifts is twice the central generator
  REQUIRE(r2.relations.rows() == 3);
  CHECK(abs(r2.relations(0, 2)) == 2);
}

TEST_CASE("ia_kernel_enum") {
  auto free = FiberGroup::direct(integer_group(2), FiniteGroup::cyclic(1));
  auto k0 = ia_kernel_enum(free, free.standard_generators());
  CHECK(k0.maps.size() == 1);
  auto u = entry("z-x-z2-z4");
  auto k1 = ia_kernel_enum(*u, {el({1}, 1), el({0}, 2)});
  REQUIRE(k1.maps.size() == 2);
  CHECK(k1.closed);
  std::vector<std::vector<Element>> tuples(k1.tuples.begin(), k1.tuples.end());
  std::sort(tuples.begin(), tuples.end());
  CHECK(tuples[0] == std::vector<Element>{0, 0});
  CHECK(tuples[1] == std::vector<Element>{2, 0});
  auto k2 = ia_kernel_enum(*entry("z-x-z2"), {el({1}, 0), el({0}, 1)});
  CHECK(k2.maps.size() == 2);
  CHECK(k2.closed);
  CHECK_THROWS_AS(ia_kernel_enum(*u, {el({0}, 2)}), InvalidInput);
}

TEST_CASE("lifting from level m on z x_{z/2} z/4") {
  auto u = entry("z-x-z2-z4");
  LevelQuotients lq(*u, 4);
  std::vector<Element> id(lq.gamma_m().group.order());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<Element>(i);
  auto r0 = lift_from_level(*u, lq, scalar(1), id, 2);
  REQUIRE(r0.ok);
  CHECK(r0.alpha(el({3}, 1)) == el({3}, 1));
  // the nontrivial element of K~: (x, y) -> (x, y + 2x)
  FiberMap k = [](const FiberElement& g) {
    return FiberElement{g.x, static_cast<Element>(((g.y + 2 * g.x[0].get_si()) % 4 + 4) % 4)};
  };
  auto am = reduce_automorphism(lq, k);
  auto r1 = lift_from_level(*u, lq, scalar(1), am, 2);
  REQUIRE(r1.ok);
  CHECK(r1.alpha(el({1}, 1)) == el({1}, 3));
  CHECK(r1.alpha(el({0}, 2)) == el({0}, 2));
  CHECK(r1.alpha(el({-3}, 1)) == k(el({-3}, 1)));
  CHECK_FALSE(lift_from_level(*u, lq, scalar(1), am, 3).ok);
}

TEST_CASE("lifting from level m on heisenberg x z/3") {
  auto u = entry("heisenberg-x-z3");
  LevelQuotients lq(*u, 6);
  ZMatrix beta = ZMatrix::identity(3);
  beta(0, 2) = 1;
  auto lifted = lift_automorphism(*u, beta, {0, 1, 2});
  REQUIRE(lifted.aut);
  auto am = reduce_automorphism(lq, [&](const FiberElement& g) { return lifted.aut->apply(g); });
  auto r = lift_from_level(*u, lq, beta, am, 3);
  REQUIRE(r.ok);
  CHECK(reduce_automorphism(lq, r.alpha) == am);
  for (const auto& g : u->standard_generators()) CHECK(r.alpha(g) == lifted.aut->apply(g));
  // beta that does not match alpha_m on Delta/Delta^m
  ZMatrix other = ZMatrix::identity(3);
  other(1, 2) = 1;
  auto bad = lift_from_level(*u, lq, other, am, 3);
  CHECK_FALSE(bad.ok);
  CHECK(bad.error == "alpha_m is not realizable by the supplied beta");
}
