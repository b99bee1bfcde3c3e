#include "nilcsp/catalog.hpp"

#include <sstream>

#include "nilcsp/automorphism.hpp"
#include "nilcsp/free_nilpotent.hpp"

namespace nilcsp {

namespace {

std::vector<QVector> units(std::size_t n) {
  std::vector<QVector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(unit_vector(n, i));
  return out;
}

// the hull's adapted basis, as a filtered generating set of the hull
GenGroup hull_as_group(const GenGroup& g) {
  LatticeGroup h = lattice_hull(g);
  return GenGroup{h.algebra(), h.basis(), true};
}

Expected trivial(std::string v) { return {std::move(v), "trivial"}; }
Expected derived(std::string v) { return {std::move(v), "derived"}; }

}  // namespace

GenGroup group_from_recipe(const std::string& recipe) {
  std::istringstream in(recipe);
  std::string kind;
  in >> kind;
  if (kind == "abelian") {
    std::size_t n = 0;
    if (!(in >> n) || n == 0 || n > 32) throw InvalidInput("bad recipe: " + recipe);
    return GenGroup{std::make_shared<const LieAlgebra>(LieAlgebra::abelian(n)), units(n), true};
  }
  if (kind == "heisenberg") return GenGroup{std::make_shared<const LieAlgebra>(LieAlgebra::heisenberg()), units(3), true};
  if (kind == "free" || kind == "free-hull") {
    std::size_t n = 0;
    unsigned c = 0;
    if (!(in >> n >> c) || n == 0 || c == 0) throw InvalidInput("bad recipe: " + recipe);
    GenGroup g = FreeNilpotent(n, c).psi_malcev();
    return kind == "free" ? g : hull_as_group(g);
  }
  throw InvalidInput("unknown recipe: " + recipe);
}

std::vector<CatalogEntry> default_catalog() {
  std::vector<CatalogEntry> out;
  for (std::size_t n = 1; n <= 3; ++n) {
    CatalogEntry e;
    e.name = "abelian-" + std::to_string(n);
    e.recipe = "abelian " + std::to_string(n);
    e.witt_layers = {n};
    e.hull_index = trivial("1");
    e.d = trivial(std::to_string(n));
    e.k = trivial(std::to_string(n));
    e.ia_rank = trivial("0");
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "heisenberg";
    e.recipe = "heisenberg";
    e.witt_layers = {2, 1};
    e.hull_index = derived("2");
    e.d = derived("2");
    e.k = derived("3");
    e.ia_rank = derived("2");
    out.push_back(e);
  }
  struct Free {
    std::size_t n;
    unsigned c;
    const char* index;
    std::size_t k, rank;
  };
  for (auto f : {Free{2, 2, "2", 3, 2}, Free{2, 3, "288", 5, 6}, Free{3, 2, "8", 6, 9}}) {
    std::vector<std::size_t> layers;
    for (unsigned w = 1; w <= f.c; ++w) layers.push_back(witt_dimension(f.n, w));
    std::string nc = std::to_string(f.n) + " " + std::to_string(f.c);
    std::string tag = std::to_string(f.n) + "-" + std::to_string(f.c);
    CatalogEntry e;
    e.name = "free-" + tag;
    e.recipe = "free " + nc;
    e.witt_layers = layers;
    e.hull_index = derived(f.index);
    e.d = derived(std::to_string(f.n));
    e.k = derived(std::to_string(f.k));
    e.ia_rank = derived(std::to_string(f.rank));
    out.push_back(e);
    e.name = "free-hull-" + tag;
    e.recipe = "free-hull " + nc;
    e.hull_index = trivial("1");
    out.push_back(e);
  }
  for (auto& e : out) e.group = group_from_recipe(e.recipe);
  return out;
}

LatticeGroupPtr make_hull(const GenGroup& g) { return std::make_shared<const LatticeGroup>(lattice_hull(g)); }

LatticeGroupPtr heisenberg_hull_group() { return make_hull(group_from_recipe("heisenberg")); }

LatticeGroupPtr integer_group(std::size_t n) { return make_hull(group_from_recipe("abelian " + std::to_string(n))); }

std::vector<TorsionEntry> torsion_catalog() {
  auto Z = integer_group(1);
  auto H = heisenberg_hull_group();
  auto C = [](std::size_t n) { return FiniteGroup::cyclic(n); };
  auto fg = [](FiberGroup g) { return std::make_shared<const FiberGroup>(std::move(g)); };
  std::vector<TorsionEntry> out;
  out.push_back({"z-x-z2-z4", fg(FiberGroup(Z, C(4), C(2), {1}, {1}, {1})), 2, 2});
  out.push_back({"heisenberg-x-z3", fg(FiberGroup::direct(H, C(3))), 3, 3});
  out.push_back({"z-x-z2", fg(FiberGroup::direct(Z, C(2))), 2, 2});
  out.push_back({"z-x-z3", fg(FiberGroup::direct(Z, C(3))), 3, 3});
  out.push_back({"heisenberg-x-z2-z4", fg(FiberGroup(H, C(4), C(2), {1, 0, 0}, {1}, {1})), 2, 2});
  {
    FiniteGroup s3 = FiniteGroup::symmetric(3);
    auto gens = generating_set(s3);
    std::vector<Element> sign;
    for (auto g : gens) sign.push_back(s3.element_order(g) == 2 ? 1 : 0);
    out.push_back({"z-x-z2-s3", fg(FiberGroup(Z, s3, C(2), {1}, gens, sign)), 6, 3});
  }
  out.push_back({"z-x-z3-z9", fg(FiberGroup(Z, C(9), C(3), {1}, {1}, {1})), 3, 3});
  return out;
}

std::vector<ZMatrix> sample_automorphisms(const LatticeGroup& delta, std::size_t max_count) {
  const std::size_t k = delta.dim(), d = delta.abelian_rank();
  const LieAlgebra& B = *delta.basis_algebra();
  std::vector<ZMatrix> out{ZMatrix::identity(k)};
  auto accept = [&](const ZMatrix& A) {
    if (out.size() >= max_count) return;
    Integer det = integer_determinant(A);
    if (det != 1 && det != -1) return;
    if (!is_lie_aut(B, to_rational(A)).ok) return;
    for (const auto& M : out)
      if (M == A) return;
    out.push_back(A);
  };
  auto extend = [&](const ZMatrix& top) {
    QMatrix rows(d, k);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) rows(i, j) = top(i, j);
    return extend_first_layer(delta, rows);
  };
  std::vector<ZMatrix> tops;
  if (d >= 1) {
    ZMatrix neg = ZMatrix::identity(d);
    for (std::size_t i = 0; i < d; ++i) neg(i, i) = -1;
    tops.push_back(neg);
    ZMatrix flip = ZMatrix::identity(d);
    flip(0, 0) = -1;
    tops.push_back(flip);
  }
  if (d >= 2) {
    ZMatrix swap = ZMatrix::identity(d);
    swap(0, 0) = swap(1, 1) = 0;
    swap(0, 1) = swap(1, 0) = 1;
    tops.push_back(swap);
    ZMatrix shear = ZMatrix::identity(d);
    shear(0, 1) = 1;
    tops.push_back(shear);
  }
  for (const auto& t : tops)
    if (auto A = extend(t)) accept(*A);
  IaSystem sys(std::make_shared<const LatticeGroup>(delta));
  for (const auto& A : enumerate_ia_star(sys, 1)) {
    if (out.size() >= max_count) break;
    accept(A);
  }
  return out;
}

}  // namespace nilcsp
