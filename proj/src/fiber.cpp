#include "nilcsp/fiber.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "nilcsp/automorphism.hpp"
#include "nilcsp/normal_forms.hpp"

namespace nilcsp {

namespace {

constexpr Element kUnset = static_cast<Element>(-1);

std::vector<Element> unit_codes(const CongruenceQuotient& cq, std::size_t k) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::int64_t> c(k, 0);
    c[i] = 1;
    out.push_back(cq.encode(c.data()));
  }
  return out;
}

bool covers(const std::vector<Element>& map, std::size_t order) {
  std::vector<bool> hit(order, false);
  for (auto e : map) hit[e] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

ZVector times(const ZVector& x, const ZMatrix& A) { return row_times(x, A); }

}  // namespace

std::int64_t group_exponent(const FiniteGroup& g) {
  std::int64_t e = 1;
  for (std::size_t a = 0; a < g.order(); ++a)
    e = std::lcm(e, static_cast<std::int64_t>(g.element_order(static_cast<Element>(a))));
  return e;
}

FiberGroup::FiberGroup(LatticeGroupPtr p1, FiniteGroup p2, FiniteGroup q, std::vector<Element> pi1_images,
                       std::vector<Element> p2_generators, std::vector<Element> p2_images)
    : p1_(std::move(p1)),
      p2_(std::move(p2)),
      q_(std::move(q)),
      pi1_images_(std::move(pi1_images)),
      p2_gens_(std::move(p2_generators)),
      p2_images_(std::move(p2_images)) {
  const std::size_t k = p1_->dim();
  if (pi1_images_.size() != k) throw DimensionMismatch("pi1 needs one image per basis element");
  for (auto e : pi1_images_)
    if (e >= q_.order()) throw InvalidInput("pi1 image outside Q");
  for (auto e : p2_gens_)
    if (e >= p2_.order()) throw InvalidInput("P2 generator out of range");
  for (auto e : p2_images_)
    if (e >= q_.order()) throw InvalidInput("pi2 image outside Q");
  auto full = subgroup_closure(p2_, p2_gens_);
  if (std::count(full.begin(), full.end(), true) != static_cast<long>(p2_.order()))
    throw InvalidInput("the given elements do not generate P2");
  auto m2 = extend_homomorphism(p2_, p2_gens_, p2_images_, q_);
  if (!m2) throw InvalidInput("pi2 is not a homomorphism");
  if (!covers(*m2, q_.order())) throw InvalidInput("pi2 is not surjective");
  pi2_map_ = std::move(*m2);
  p2_exponent_ = group_exponent(p2_);
  base_ = std::make_shared<const CongruenceQuotient>(p1_, congruence_scale(*p1_, group_exponent(q_)));
  FiniteGroup g0 = base_->group();
  auto m1 = extend_homomorphism(g0, unit_codes(*base_, k), pi1_images_, q_);
  if (!m1) throw InvalidInput("pi1 is not a homomorphism");
  if (!covers(*m1, q_.order())) throw InvalidInput("pi1 is not surjective");
  pi1_map_ = std::move(*m1);
}

FiberGroup FiberGroup::direct(LatticeGroupPtr p1, FiniteGroup p2) {
  std::size_t k = p1->dim();
  auto gens = generating_set(p2);
  return FiberGroup(std::move(p1), std::move(p2), FiniteGroup::cyclic(1), std::vector<Element>(k, 0), gens,
                    std::vector<Element>(gens.size(), 0));
}

Element FiberGroup::pi1(const ZVector& x) const { return pi1_map_[base_->encode(x)]; }

bool FiberGroup::contains(const FiberElement& g) const {
  if (g.x.size() != dim() || g.y >= p2_.order()) return false;
  return pi1(g.x) == pi2(g.y);
}

FiberElement FiberGroup::identity() const { return {ZVector(dim(), Integer(0)), p2_.identity()}; }

FiberElement FiberGroup::mul(const FiberElement& a, const FiberElement& b) const {
  return {p1_->law().multiply(a.x, b.x), p2_.mul(a.y, b.y)};
}

FiberElement FiberGroup::inv(const FiberElement& a) const {
  ZVector x = a.x;
  for (auto& v : x) v = -v;
  return {x, p2_.inv(a.y)};
}

FiberElement FiberGroup::basis_lift(std::size_t i) const {
  ZVector x(dim(), Integer(0));
  x[i] = 1;
  Element target = pi1(x);
  for (std::size_t y = 0; y < p2_.order(); ++y)
    if (pi2_map_[y] == target) return {x, static_cast<Element>(y)};
  throw Error("pi2 is not surjective");
}

std::vector<FiberElement> FiberGroup::standard_generators() const {
  std::vector<FiberElement> out;
  for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis_lift(i));
  auto tor = torsion_subgroup(*this);
  for (auto g : generating_set(tor.group)) out.push_back({ZVector(dim(), Integer(0)), tor.embedding[g]});
  return out;
}

FiniteFiberProduct finite_fiber_product(const FiniteGroup& p1, const FiniteGroup& p2,
                                        const std::vector<Element>& pi1, const std::vector<Element>& pi2) {
  if (pi1.size() != p1.order() || pi2.size() != p2.order()) throw DimensionMismatch("projection maps");
  std::size_t qn = 0;
  for (auto e : pi1) qn = std::max<std::size_t>(qn, e + 1);
  for (auto e : pi2) qn = std::max<std::size_t>(qn, e + 1);
  if (!covers(pi1, qn) || !covers(pi2, qn)) throw InvalidInput("projections must be onto the same Q");
  FiniteFiberProduct out;
  std::vector<std::int64_t> index(p1.order() * p2.order(), -1);
  for (std::size_t a = 0; a < p1.order(); ++a)
    for (std::size_t b = 0; b < p2.order(); ++b)
      if (pi1[a] == pi2[b]) {
        index[a * p2.order() + b] = static_cast<std::int64_t>(out.pairs.size());
        out.pairs.emplace_back(static_cast<Element>(a), static_cast<Element>(b));
      }
  const std::size_t n = out.pairs.size();
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto [a1, b1] = out.pairs[i];
      auto [a2, b2] = out.pairs[j];
      table[i][j] = static_cast<Element>(index[p1.mul(a1, a2) * p2.order() + p2.mul(b1, b2)]);
    }
  out.group = FiniteGroup::from_table(std::move(table));
  return out;
}

TorsionSubgroup torsion_subgroup(const FiberGroup& u) {
  TorsionSubgroup out;
  const auto& p2 = u.p2();
  std::vector<std::int64_t> index(p2.order(), -1);
  for (std::size_t y = 0; y < p2.order(); ++y)
    if (u.pi2(static_cast<Element>(y)) == u.q().identity()) {
      index[y] = static_cast<std::int64_t>(out.embedding.size());
      out.embedding.push_back(static_cast<Element>(y));
    }
  const std::size_t n = out.embedding.size();
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      table[i][j] = static_cast<Element>(index[p2.mul(out.embedding[i], out.embedding[j])]);
  out.group = FiniteGroup::from_table(std::move(table));
  return out;
}

FiberQuotient::FiberQuotient(const FiberGroup& u, std::int64_t scale) : u_(&u), s_(scale) {
  if (scale % u.base_scale() != 0)
    throw InvalidInput("scale must be a multiple of " + std::to_string(u.base_scale()));
  cq_ = std::make_shared<const CongruenceQuotient>(u.p1(), scale);
  const std::size_t n2 = u.p2().order(), k = u.dim();
  if (static_cast<long double>(cq_->order()) * n2 > 2.0e7L) throw CapExceeded("fiber quotient too large");
  pairs_ = std::make_shared<std::vector<std::pair<Element, Element>>>();
  index_ = std::make_shared<std::vector<std::int32_t>>(cq_->order() * n2, -1);
  std::vector<std::int64_t> c(k);
  for (std::size_t code = 0; code < cq_->order(); ++code) {
    cq_->decode(static_cast<Element>(code), c.data());
    Element qv = u.pi1_code(u.base_quotient().encode(c.data()));
    for (std::size_t y = 0; y < n2; ++y)
      if (u.pi2(static_cast<Element>(y)) == qv) {
        (*index_)[code * n2 + y] = static_cast<std::int32_t>(pairs_->size());
        pairs_->emplace_back(static_cast<Element>(code), static_cast<Element>(y));
      }
  }
  auto p2 = std::make_shared<const FiniteGroup>(u.p2());
  auto cq = cq_;
  auto pairs = pairs_;
  auto index = index_;
  Element id = static_cast<Element>((*index_)[p2->identity()]);
  group_ = FiniteGroup::from_law(
      pairs_->size(), id,
      [=](Element a, Element b) {
        auto [ca, ya] = (*pairs)[a];
        auto [cb, yb] = (*pairs)[b];
        return static_cast<Element>((*index)[cq->mul(ca, cb) * n2 + p2->mul(ya, yb)]);
      },
      [=](Element a) {
        auto [ca, ya] = (*pairs)[a];
        return static_cast<Element>((*index)[cq->inv(ca) * n2 + p2->inv(ya)]);
      });
  if (group_.order() <= 4096) group_ = group_.materialized();
}

Element FiberQuotient::encode(const FiberElement& g) const {
  std::int32_t i = (*index_)[cq_->encode(g.x) * u_->p2().order() + g.y];
  if (i < 0) throw InvalidInput("element is not in the fiber product");
  return static_cast<Element>(i);
}

FiberElement FiberQuotient::representative(Element f) const {
  auto [c, y] = (*pairs_)[f];
  return {cq_->decode(c), y};
}

std::vector<Element> FiberQuotient::torsion_image() const {
  std::vector<Element> out;
  for (std::size_t f = 0; f < pairs_->size(); ++f)
    if ((*pairs_)[f].first == 0) out.push_back(static_cast<Element>(f));
  return out;
}

std::int64_t level_scale(const FiberGroup& u, std::int64_t m) {
  std::int64_t s = congruence_scale(*u.p1(), m * u.p2_exponent());
  if (s % u.base_scale() != 0) throw Error("level scale is not a multiple of the base scale");
  return s;
}

std::int64_t find_t(const FiberGroup& u, std::int64_t cap) {
  if (torsion_subgroup(u).group.order() == 1) return 1;
  for (std::int64_t t = 1; t <= cap; ++t) {
    FiberQuotient f(u, level_scale(u, t));
    auto power = power_subgroup(f.group(), t);
    bool meets = false;
    for (auto e : f.torsion_image())
      if (e != f.group().identity() && power[e]) meets = true;
    if (!meets) return t;
  }
  throw CapExceeded("no t <= " + std::to_string(cap));
}

LevelQuotients::LevelQuotients(const FiberGroup& u, std::int64_t m)
    : m_(m), f_(u, level_scale(u, m)), delta_s_(f_.delta_quotient().group()) {
  fm_ = power_subgroup(f_.group(), m);
  gamma_m_ = quotient_group(f_.group(), fm_);
  delta_m_ = quotient_group(delta_s_, power_subgroup(delta_s_, m));
}

RhoReport check_rho(const FiberGroup& u, std::int64_t m) {
  LevelQuotients lq(u, m);
  RhoReport r;
  r.m = m;
  r.scale = lq.f().scale();
  r.f_order = lq.f().order();
  r.gamma_m_order = lq.gamma_m().group.order();
  r.delta_m_order = lq.delta_m().group.order();
  for (auto e : lq.f().torsion_image())
    if (lq.power_subgroup_of_f()[e]) ++r.torsion_meets_power;
  std::vector<std::uint64_t> images;
  images.reserve(r.f_order);
  for (std::size_t f = 0; f < r.f_order; ++f) {
    Element d = lq.f().delta_code(static_cast<Element>(f));
    Element g = lq.gamma_m().coset_of[f];
    if (lq.delta_m().coset_of[d] != lq.delta_of(g)) throw Error("rho image outside the fiber product");
    images.push_back(static_cast<std::uint64_t>(d) * r.gamma_m_order + g);
  }
  std::sort(images.begin(), images.end());
  r.image_size = static_cast<std::size_t>(std::unique(images.begin(), images.end()) - images.begin());
  r.fiber_size = lq.delta_s().order() / r.delta_m_order * r.gamma_m_order;
  r.injective = r.image_size == r.f_order;
  r.surjective = r.image_size == r.fiber_size;
  if (r.injective != (r.torsion_meets_power == 1)) throw Error("injectivity tests disagree");
  return r;
}

FiberElement ProductAutomorphism::apply(const FiberElement& g) const { return {times(g.x, A), sigma2[g.y]}; }

LiftAttempt lift_automorphism(const FiberGroup& u, const ZMatrix& A, const std::vector<Element>& sigma2) {
  LiftAttempt out;
  const std::size_t k = u.dim();
  if (A.rows() != k || A.cols() != k) throw DimensionMismatch("sigma1 has the wrong size");
  if (sigma2.size() != u.p2().order()) throw DimensionMismatch("sigma2 has the wrong size");
  Integer det = integer_determinant(A);
  if (det != 1 && det != -1) {
    out.error = "sigma1 does not preserve the lattice";
    return out;
  }
  if (!is_lie_aut(*u.p1()->basis_algebra(), to_rational(A)).ok) {
    out.error = "sigma1 is not a Lie automorphism";
    return out;
  }
  auto gens = generating_set(u.p2());
  std::vector<Element> imgs;
  for (auto g : gens) imgs.push_back(sigma2[g]);
  auto ext = extend_homomorphism(u.p2(), gens, imgs, u.p2());
  if (!ext || *ext != sigma2 || !is_bijective(sigma2, u.p2().order())) {
    out.error = "sigma2 is not an automorphism of P2";
    return out;
  }
  const std::size_t nq = u.q().order();
  std::vector<Element> bar1(nq, kUnset), bar2(nq, kUnset);
  const auto& base = u.base_quotient();
  for (std::size_t c = 0; c < base.order(); ++c) {
    ZVector x = base.decode(static_cast<Element>(c));
    Element q0 = u.pi1_code(static_cast<Element>(c));
    Element q1 = u.pi1(times(x, A));
    if (bar1[q0] == kUnset) {
      bar1[q0] = q1;
    } else if (bar1[q0] != q1) {
      out.error = "sigma1 does not preserve ker pi1";
      out.witness = q0;
      return out;
    }
  }
  for (std::size_t y = 0; y < u.p2().order(); ++y) {
    Element q0 = u.pi2(static_cast<Element>(y));
    Element q1 = u.pi2(sigma2[y]);
    if (bar2[q0] == kUnset) {
      bar2[q0] = q1;
    } else if (bar2[q0] != q1) {
      out.error = "sigma2 does not preserve ker pi2";
      out.witness = q0;
      return out;
    }
  }
  for (std::size_t q = 0; q < nq; ++q)
    if (bar1[q] != bar2[q]) {
      out.error = "induced automorphisms of Q differ";
      out.witness = static_cast<Element>(q);
      return out;
    }
  out.aut = ProductAutomorphism{A, sigma2};
  return out;
}

AutCheck verify_on_quotient(const FiberGroup& u, const FiberMap& map, std::int64_t scale, std::uint64_t seed,
                            std::size_t samples) {
  FiberQuotient f(u, scale);
  const std::size_t n = f.order();
  const FiniteGroup& g = f.group();
  std::vector<Element> img(n);
  for (std::size_t a = 0; a < n; ++a) {
    FiberElement x = map(f.representative(static_cast<Element>(a)));
    if (!u.contains(x)) return {false, "image of an element is not in U"};
    img[a] = f.encode(x);
  }
  if (!is_bijective(img, n)) return {false, "not bijective on the finite quotient"};
  auto hom_at = [&](Element a, Element b) { return img[g.mul(a, b)] == g.mul(img[a], img[b]); };
  if (n <= 512) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (!hom_at(static_cast<Element>(a), static_cast<Element>(b))) return {false, "not multiplicative"};
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < samples; ++i)
      if (!hom_at(static_cast<Element>(pick(rng)), static_cast<Element>(pick(rng))))
        return {false, "not multiplicative"};
  }
  for (auto t : f.torsion_image())
    if (f.delta_code(img[t]) != 0) return {false, "torsion subgroup not preserved"};
  return {};
}

AutCheck verify_projections(const FiberGroup& u, const ProductAutomorphism& s, std::int64_t scale) {
  FiberQuotient f(u, scale);
  for (std::size_t a = 0; a < f.order(); ++a) {
    FiberElement x = f.representative(static_cast<Element>(a));
    FiberElement y = s.apply(x);
    if (y.x != times(x.x, s.A)) return {false, "pr1 identity fails"};
    if (y.y != s.sigma2[x.y]) return {false, "pr2 identity fails"};
  }
  return {};
}

GammaStarReport gamma_star_check(const FiberGroup& u) {
  GammaStarReport r;
  const auto& delta = *u.p1();
  const std::size_t k = u.dim();
  r.d = delta.abelian_rank();
  std::vector<FiberElement> g;
  for (std::size_t i = 0; i < k; ++i) g.push_back(u.basis_lift(i));
  std::vector<ZVector> rows;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      FiberElement c = u.mul(u.mul(u.inv(g[i]), u.inv(g[j])), u.mul(g[i], g[j]));
      rows.push_back(delta.second_kind(c.x));
    }
  r.relations = ZMatrix(rows.size(), k);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < k; ++b) r.relations(a, b) = rows[a][b];
  auto sm = smith_form(r.relations);
  r.invariants = sm.diagonal;
  r.free_rank = k - sm.rank();
  std::vector<QVector> span;
  for (const auto& row : rows) {
    for (std::size_t b = 0; b < r.d; ++b)
      if (row[b] != 0) {
        r.failure = "a commutator relation involves the first layer";
        return r;
      }
    span.push_back(to_rational(row));
  }
  Lattice saturation = intersect_subspace(Lattice::standard(k), span);
  for (std::size_t j = r.d; j < k; ++j)
    if (!saturation.contains(unit_vector(k, j))) {
      r.failure = "generator " + std::to_string(j) + " is not torsion in Gamma*";
      return r;
    }
  // Gamma* has basis the classes of g_0..g_{d-1}; Delta* the first-layer coordinates
  r.to_delta = ZMatrix(r.d, r.d);
  r.from_delta = ZMatrix(r.d, r.d);
  for (std::size_t i = 0; i < r.d; ++i)
    for (std::size_t j = 0; j < r.d; ++j) {
      r.to_delta(i, j) = g[i].x[j];
      // class of the lift of Delta* basis vector i, in Gamma* coordinates
      r.from_delta(i, j) = u.basis_lift(i).x[j];
    }
  if (r.free_rank != r.d) {
    r.failure = "Gamma* has rank " + std::to_string(r.free_rank) + " but Delta* has rank " + std::to_string(r.d);
    return r;
  }
  ZMatrix I = ZMatrix::identity(r.d);
  if (r.to_delta * r.from_delta != I || r.from_delta * r.to_delta != I) {
    r.failure = "canonical maps are not mutually inverse";
    return r;
  }
  r.ok = true;
  return r;
}

KTilde ia_kernel_enum(const FiberGroup& u, const std::vector<FiberElement>& gens, std::size_t cap) {
  KTilde out;
  for (const auto& g : gens)
    if (!u.contains(g)) throw InvalidInput("generator is not in U");
  const std::int64_t t = find_t(u, 64);
  out.scale = level_scale(u, t);
  FiberQuotient f(u, out.scale);
  const FiniteGroup& F = f.group();
  std::vector<Element> codes;
  for (const auto& g : gens) codes.push_back(f.encode(g));
  auto span = subgroup_closure(F, codes);
  if (std::count(span.begin(), span.end(), true) != static_cast<long>(F.order()))
    throw InvalidInput("generators do not generate the finite quotient");
  const std::size_t d = u.p1()->abelian_rank();
  ZMatrix ab(gens.size(), d);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) ab(i, j) = gens[i].x[j];
  auto sm = smith_form(ab);
  bool onto = sm.rank() == d;
  for (std::size_t i = 0; i < sm.rank(); ++i) onto = onto && abs(sm.diagonal[i]) == 1;
  if (!onto) throw InvalidInput("generators do not generate modulo the derived subgroup");

  auto tor = torsion_subgroup(u).embedding;
  long double total = 1;
  for (std::size_t i = 0; i < gens.size(); ++i) total *= static_cast<long double>(tor.size());
  if (total > static_cast<long double>(cap)) throw CapExceeded("too many candidate maps");
  std::vector<std::size_t> idx(gens.size(), 0);
  for (;;) {
    std::vector<Element> images, tuple;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      tuple.push_back(tor[idx[i]]);
      images.push_back(f.encode(u.mul(gens[i], {ZVector(u.dim(), Integer(0)), tor[idx[i]]})));
    }
    auto phi = extend_homomorphism(F, codes, images, F);
    if (phi && is_bijective(*phi, F.order())) {
      out.tuples.push_back(tuple);
      out.maps.push_back(std::move(*phi));
    }
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == tor.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  std::set<std::vector<Element>> set(out.maps.begin(), out.maps.end());
  out.closed = true;
  for (const auto& a : out.maps)
    for (const auto& b : out.maps) {
      std::vector<Element> c(F.order());
      for (std::size_t x = 0; x < F.order(); ++x) c[x] = a[b[x]];
      if (!set.count(c)) out.closed = false;
    }
  return out;
}

std::vector<Element> reduce_automorphism(const LevelQuotients& lq, const FiberMap& map) {
  const auto& gm = lq.gamma_m();
  std::vector<Element> out(gm.group.order());
  for (std::size_t g = 0; g < out.size(); ++g)
    out[g] = lq.reduce(map(lq.f().representative(gm.representative[g])));
  return out;
}

RoundTrip lift_from_level(const FiberGroup& u, const LevelQuotients& lq, const ZMatrix& beta,
                           const std::vector<Element>& alpha_m, std::int64_t t) {
  RoundTrip out;
  if (t <= 0 || lq.m() % t != 0) {
    out.error = "t does not divide m";
    return out;
  }
  const auto& gm = lq.gamma_m();
  const std::size_t n = gm.group.order();
  if (!is_ia_star(*u.p1(), to_rational(beta))) {
    out.error = "beta is not in IA* of the hull";
    return out;
  }
  if (alpha_m.size() != n || !is_bijective(alpha_m, n)) {
    out.error = "alpha_m is not a bijection of the level-m quotient";
    return out;
  }
  auto gens = generating_set(gm.group);
  std::vector<Element> imgs;
  for (auto g : gens) imgs.push_back(alpha_m[g]);
  auto ext = extend_homomorphism(gm.group, gens, imgs, gm.group);
  if (!ext || *ext != alpha_m) {
    out.error = "alpha_m is not an automorphism";
    return out;
  }
  for (std::size_t g = 0; g < n; ++g) {
    ZVector x = lq.f().representative(gm.representative[g]).x;
    if (lq.delta_of(alpha_m[g]) != lq.reduce_delta(times(x, beta))) {
      out.error = "alpha_m is not realizable by the supplied beta";
      return out;
    }
  }
  const FiberGroup* up = &u;
  const LevelQuotients* lp = &lq;
  auto am = std::make_shared<const std::vector<Element>>(alpha_m);
  ZMatrix B = beta;
  // rho^{-1}(beta(pr1 g), alpha_m(g U^m))
  out.alpha = [up, lp, am, B](const FiberElement& g) {
    ZVector x = times(g.x, B);
    Element target = (*am)[lp->reduce(g)];
    Element q = up->pi1(x);
    for (std::size_t y = 0; y < up->p2().order(); ++y) {
      if (up->pi2(static_cast<Element>(y)) != q) continue;
      FiberElement cand{x, static_cast<Element>(y)};
      if (lp->reduce(cand) == target) return cand;
    }
    throw Error("no preimage under rho");
  };
  auto reduced = reduce_automorphism(lq, out.alpha);
  if (reduced != alpha_m) {
    out.error = "lift does not reduce to alpha_m";
    return out;
  }
  auto check = verify_on_quotient(u, out.alpha, lq.f().scale());
  if (!check.ok) {
    out.error = "lift is not an automorphism: " + check.failure;
    return out;
  }
  const std::size_t d = u.p1()->abelian_rank();
  for (const auto& g : u.standard_generators()) {
    FiberElement a = out.alpha(g);
    for (std::size_t j = 0; j < d; ++j)
      if (a.x[j] != g.x[j]) {
        out.error = "lift acts nontrivially on Gamma*";
        return out;
      }
  }
  if (!gamma_star_check(u).ok) {
    out.error = "Gamma* and Delta* are not identified";
    return out;
  }
  out.ok = true;
  return out;
}

}  // namespace nilcsp
