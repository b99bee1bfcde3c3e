#include "nilcsp/verify.hpp"

#include <chrono>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "nilcsp/free_nilpotent.hpp"
#include "nilcsp/normal_forms.hpp"

namespace nilcsp {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class Body>
CheckResult run_check(const std::string& name, Body&& body) {
  CheckResult r;
  r.name = name;
  auto t0 = Clock::now();
  try {
    body(r);
  } catch (const CapExceeded& e) {
    r.status = CheckStatus::inconclusive;
    r.detail = std::string("cap reached: ") + e.what();
  } catch (const Error& e) {
    r.status = CheckStatus::fail;
    r.detail = e.what();
  }
  r.seconds = since(t0);
  return r;
}

void expect(CheckResult& r, bool ok, const std::string& what) {
  if (!ok && r.status != CheckStatus::fail) {
    r.status = CheckStatus::fail;
    r.detail = what;
  }
}

Rational random_entry(std::mt19937_64& rng) {
  long den = std::uniform_int_distribution<long>(1, 4)(rng);
  long num = std::uniform_int_distribution<long>(-3 * den, 3 * den)(rng);
  return make_rational(num, den);
}

QVector random_vector(std::mt19937_64& rng, std::size_t n) {
  QVector v(n);
  for (auto& x : v) x = random_entry(rng);
  return v;
}

const std::vector<CatalogEntry>& catalog_of(const VerifyOptions& opts, std::vector<CatalogEntry>& storage) {
  if (!opts.catalog.empty()) return opts.catalog;
  storage = default_catalog();
  return storage;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// ---- bch-oracle ----

void suite_bch(const VerifyOptions& opts, VerificationReport& rep) {
  rep.caps = {{"pairs", opts.bch_pairs}, {"roundtrips", opts.roundtrips}};
  rep.checks.push_back(run_check("bch-matrix-oracle", [&](CheckResult& r) {
    std::mt19937_64 rng(opts.seed);
    std::vector<LieAlgebra> algebras;
    for (std::size_t n = 3; n <= 5; ++n) algebras.push_back(LieAlgebra::strictly_upper(n));
    for (std::size_t i = 0; i < opts.bch_pairs; ++i) {
      std::size_t n = 3 + i % 3;
      const LieAlgebra& L = algebras[n - 3];
      QVector x = random_vector(rng, L.dim()), y = random_vector(rng, L.dim());
      QVector oracle = coords_from_upper(matrix_log(matrix_exp(upper_from_coords(n, x)) *
                                                    matrix_exp(upper_from_coords(n, y))));
      expect(r, bch(L, x, y) == oracle, "pair " + std::to_string(i) + " differs in Tr0(" + std::to_string(n) + ")");
    }
    r.data = {{"pairs", opts.bch_pairs}, {"sizes", {3, 4, 5}}};
  }));
  rep.checks.push_back(run_check("exp-log-roundtrip", [&](CheckResult& r) {
    std::mt19937_64 rng(opts.seed + 1);
    for (std::size_t i = 0; i < opts.roundtrips; ++i) {
      std::size_t n = 2 + i % 5;
      QMatrix N = upper_from_coords(n, random_vector(rng, n * (n - 1) / 2));
      expect(r, matrix_log(matrix_exp(N)) == N, "log(exp N) != N at sample " + std::to_string(i));
      QMatrix U = upper_from_coords(n, random_vector(rng, n * (n - 1) / 2)) + QMatrix::identity(n);
      expect(r, matrix_exp(matrix_log(U)) == U, "exp(log U) != U at sample " + std::to_string(i));
    }
    r.data = {{"samples", opts.roundtrips}, {"max_n", 6}};
  }));
  rep.checks.push_back(run_check("bch-associativity", [&](CheckResult& r) {
    std::mt19937_64 rng(opts.seed + 2);
    FreeNilpotent f(2, 3);
    for (int i = 0; i < 100; ++i) {
      GroupElement g{f.algebra(), random_vector(rng, 5)}, h{f.algebra(), random_vector(rng, 5)},
          k{f.algebra(), random_vector(rng, 5)};
      expect(r, group_mul(group_mul(g, h), k).log == group_mul(g, group_mul(h, k)).log,
             "associativity fails at triple " + std::to_string(i));
      expect(r, group_mul(g, group_inv(g)).log == zero_vector(5), "g * g^-1 != e");
    }
    r.data = {{"triples", 100}, {"algebra", "free 2 3"}};
  }));
}

// ---- hull / basis ----

void suite_hull(const VerifyOptions& opts, VerificationReport& rep) {
  rep.checks.push_back(run_check("heisenberg-hull", [&](CheckResult& r) {
    GenGroup g = group_from_recipe("heisenberg");
    LatticeGroup D = lattice_hull(g);
    const LieAlgebra& L = *D.algebra();
    Lattice expected = Lattice::span(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, make_rational(1, 2)}});
    expect(r, D.lattice() == expected, "hull lattice is not <e12, e23, e13/2>");
    Lattice gens = Lattice::span(3, g.generators);
    expect(r, lattice_index(D.lattice(), gens) == 2, "index over the generator span is not 2");
    expect(r, hull_index(g, D) == 2, "group index is not 2");
    LatticeGroup again = lattice_hull({D.algebra(), D.basis(), true});
    expect(r, again.lattice() == D.lattice(), "hull is not idempotent");
    // removing any basis direction breaks closure or loses a generator
    auto basis = D.lattice().basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
      auto b2 = basis;
      b2[i] = scale(Rational(2), b2[i]);
      Lattice smaller = Lattice::span(3, b2);
      bool has_gens = is_sublattice(gens, smaller);
      expect(r, !has_gens || !is_bch_closed(L, smaller), "a smaller closed lattice contains the generators");
    }
    // random enlarged candidates: every closed one contains the hull
    std::mt19937_64 rng(opts.seed);
    const std::vector<Rational> steps{0, 1, -1, make_rational(1, 2), make_rational(-1, 3), make_rational(1, 4)};
    std::size_t closed = 0;
    for (int t = 0; t < 40; ++t) {
      auto rows = g.generators;
      QVector v(3);
      for (auto& e : v) e = steps[rng() % steps.size()];
      rows.push_back(v);
      Lattice cand = Lattice::span(3, rows);
      if (!cand.full_rank() || !is_bch_closed(L, cand)) continue;
      ++closed;
      expect(r, is_sublattice(D.lattice(), cand), "closed candidate does not contain the hull");
    }
    r.data = {{"index", 2}, {"closed_candidates", closed}, {"rounds", D.rounds}};
  }));
  std::vector<CatalogEntry> storage;
  for (const auto& e : catalog_of(opts, storage))
    rep.checks.push_back(run_check("hull:" + e.name, [&](CheckResult& r) {
      LatticeGroup D = lattice_hull(e.group);
      expect(r, is_bch_closed(*D.algebra(), D.lattice()), "hull is not BCH-closed");
      expect(r, lattice_hull({D.algebra(), D.basis(), true}).lattice() == D.lattice(), "hull is not idempotent");
      for (const auto& gvec : e.group.generators)
        expect(r, D.lattice().contains(gvec), "hull misses a generator");
      std::string index = e.group.filtered ? to_string(hull_index(e.group, D)) : "unsupported";
      if (e.hull_index) expect(r, index == e.hull_index->value, "hull index " + index + " != " + e.hull_index->value);
      std::size_t d = delta_data(D).d;
      if (e.d) expect(r, std::to_string(d) == e.d->value, "d = " + std::to_string(d));
      if (e.k) expect(r, std::to_string(D.dim()) == e.k->value, "k = " + std::to_string(D.dim()));
      r.data = {{"index", index}, {"d", d}, {"k", D.dim()}, {"rounds", D.rounds}};
    }));
}

void suite_basis(const VerifyOptions& opts, VerificationReport& rep) {
  std::vector<CatalogEntry> storage;
  for (const auto& e : catalog_of(opts, storage))
    rep.checks.push_back(run_check("basis:" + e.name, [&](CheckResult& r) {
      LatticeGroup D = lattice_hull(e.group);
      const LieAlgebra& L = *D.algebra();
      const std::size_t k = L.dim();
      auto lcs = lower_central_series(L);
      lcs.push_back({});
      std::vector<std::size_t> sizes = D.layer_sizes(), lattice_ranks, smith_ranks;
      expect(r, sizes.size() + 1 == lcs.size(), "number of layers differs from the class");
      // ordering: layers are contiguous and nondecreasing
      for (std::size_t i = 1; i < D.dim(); ++i)
        expect(r, D.layer_of(i - 1) <= D.layer_of(i), "layer order violated at " + std::to_string(i));
      for (std::size_t j = 1; j <= sizes.size(); ++j) {
        Lattice upper = intersect_subspace(D.lattice(), lcs[j - 1]);
        Lattice lower = lcs[j].empty() ? Lattice::zero(k) : intersect_subspace(D.lattice(), lcs[j]);
        std::vector<QVector> tail(D.basis().begin() + D.layer_begin(j), D.basis().end());
        // layer j and below is a Z-basis of Lambda cap gamma_j, so layer j
        // is a basis of the quotient by Lambda cap gamma_{j+1}
        expect(r, Lattice::span(k, tail) == upper, "layer " + std::to_string(j) + " does not span Lambda cap gamma_j");
        for (std::size_t i = D.layer_begin(j); i < D.layer_begin(j) + sizes[j - 1]; ++i) {
          auto span = lcs[j - 1];
          span.push_back(D.basis()[i]);
          expect(r, row_space_basis(span, k).size() == lcs[j - 1].size(), "basis element outside gamma_j");
        }
        lattice_ranks.push_back(upper.rank() - lower.rank());
        smith_ranks.push_back(smith_form(upper.numerators()).rank() -
                              (lower.rank() ? smith_form(lower.numerators()).rank() : 0));
      }
      expect(r, sizes == lattice_ranks, "layer sizes differ from the lattice ranks");
      expect(r, sizes == smith_ranks, "layer sizes differ from the Smith ranks");
      if (!e.witt_layers.empty()) expect(r, sizes == e.witt_layers, "layer sizes differ from the Witt counts");
      DeltaData dd = delta_data(D);
      expect(r, dd.d == sizes[0], "d differs from the first layer");
      if (e.d) expect(r, std::to_string(dd.d) == e.d->value, "d = " + std::to_string(dd.d));
      r.data = {{"layers", join(sizes)}, {"d", dd.d}, {"k", k}};
    }));
}

// ---- ia-structure ----

void suite_ia(const VerifyOptions& opts, VerificationReport& rep) {
  rep.caps = {{"bound", opts.ia_bound}};
  rep.checks.push_back(run_check("heisenberg-ia-star", [&](CheckResult& r) {
    auto delta = heisenberg_hull_group();
    IaSystem sys(delta);
    const long N = opts.ia_bound;
    auto list = enumerate_ia_star(sys, N);
    std::set<std::pair<long, long>> family;
    for (const auto& A : list) {
      ZMatrix expect_shape = ZMatrix::identity(3);
      expect_shape(0, 2) = A(0, 2);
      expect_shape(1, 2) = A(1, 2);
      expect(r, A == expect_shape, "element outside the (alpha, beta) family");
      family.insert({A(0, 2).get_si(), A(1, 2).get_si()});
    }
    const std::size_t side = static_cast<std::size_t>(2 * N + 1);
    expect(r, list.size() == side * side, "found " + std::to_string(list.size()) + " elements");
    expect(r, family.size() == side * side, "family is not the full box");
    std::set<std::vector<Integer>> members;
    for (const auto& A : list) members.insert({A(0, 2), A(1, 2)});
    std::size_t closed_pairs = 0;
    for (const auto& A : list) {
      ZMatrix inv = unimodular_inverse(A);
      expect(r, members.count({inv(0, 2), inv(1, 2)}) == 1, "inverse missing");
      for (const auto& B : list) {
        ZMatrix P = A * B;
        if (abs(P(0, 2)) > N || abs(P(1, 2)) > N) continue;
        ++closed_pairs;
        expect(r, members.count({P(0, 2), P(1, 2)}) == 1, "in-bound product missing");
      }
    }
    r.data = {{"elements", list.size()}, {"in_bound_products", closed_pairs}};
  }));
  std::vector<CatalogEntry> storage;
  for (const auto& e : catalog_of(opts, storage))
    rep.checks.push_back(run_check("ia-rank:" + e.name, [&](CheckResult& r) {
      auto delta = make_hull(e.group);
      std::size_t rank = ia_rank(*delta->basis_algebra());
      if (e.ia_rank) expect(r, std::to_string(rank) == e.ia_rank->value, "IA* rank " + std::to_string(rank));
      // aut_star_image is multiplicative on sampled automorphisms
      auto sample = sample_automorphisms(*delta);
      for (const auto& A : sample)
        for (const auto& B : sample)
          expect(r, aut_star_image(*delta, to_rational(A * B)) ==
                        aut_star_image(*delta, to_rational(A)) * aut_star_image(*delta, to_rational(B)),
                 "aut_star_image is not multiplicative");
      r.data = {{"ia_rank", rank}, {"sampled_automorphisms", sample.size()}};
    }));
}

// ---- strong-approx ----

void suite_strong(const VerifyOptions& opts, VerificationReport& rep) {
  std::vector<std::int64_t> levels;
  if (opts.only_level)
    levels.push_back(*opts.only_level);
  else
    for (std::int64_t m = 2; m <= opts.max_level; ++m) levels.push_back(m);
  rep.caps = {{"point_cap", opts.point_cap}, {"levels", levels}};
  for (const char* recipe : {"heisenberg", "free-hull 2 3"}) {
    auto delta = make_hull(group_from_recipe(recipe));
    IaSystem sys(delta);
    for (std::int64_t m : levels)
      rep.checks.push_back(run_check(std::string("strong-approx:") + recipe + ":m=" + std::to_string(m),
                                     [&](CheckResult& r) {
        StrongApproxOptions so;
        so.point_cap = opts.point_cap;
        so.count_naive = opts.naive_counts;
        so.keep_lifts = true;
        auto sa = strong_approx_check(sys, m, so);
        r.status = sa.status;
        r.detail = sa.note;
        // every point has an explicit integral lift reducing to it
        std::size_t verified = 0;
        for (const auto& [res, vals] : sa.lifts) {
          bool ok = sys.satisfies_lie_equations(sys.dense(vals));
          for (std::size_t i = 0; i < vals.size(); ++i) ok = ok && mod_i64(vals[i], sa.scale) == res[i];
          verified += ok;
        }
        expect(r, verified == sa.points, "lifted " + std::to_string(verified) + " of " + std::to_string(sa.points));
        r.data = {{"m", m}, {"scale", sa.scale}, {"points", sa.points}, {"lifted", verified}};
        if (sa.naive_points) r.data["naive_points"] = *sa.naive_points;
      }));
  }
}

// ---- csp ----

// IA* together with a surjective homomorphism to Z^r (coordinates) whose
// kernel is generated by kernel_gens.
struct IaModel {
  LatticeGroupPtr delta;
  std::size_t r = 0;
  std::function<ZVector(const ZMatrix&)> coords;
  std::function<ZMatrix(const ZVector&)> lift;
  std::vector<ZMatrix> kernel_gens;
};

ZMatrix matrix_power(const ZMatrix& A, const Integer& e) {
  ZMatrix base = e < 0 ? unimodular_inverse(A) : A, out = ZMatrix::identity(A.rows());
  for (Integer i = 0; i < abs(e); ++i) out = out * base;
  return out;
}

// class 2 hulls: IA* = I + (first layer -> second layer), additive
IaModel class_two_model(const std::string& recipe) {
  IaModel m;
  m.delta = make_hull(group_from_recipe(recipe));
  const std::size_t k = m.delta->dim(), d = m.delta->abelian_rank();
  if (m.delta->nilpotency_class() != 2) throw Error("class 2 model on " + recipe);
  m.r = d * (k - d);
  m.coords = [=](const ZMatrix& A) {
    ZVector v;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = d; j < k; ++j) v.push_back(A(i, j));
    return v;
  };
  m.lift = [=](const ZVector& v) {
    ZMatrix A = ZMatrix::identity(k);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = d; j < k; ++j) A(i, j) = v[i * (k - d) + j - d];
    return A;
  };
  return m;
}

// free (2,3) hull: (A[0][2], A[1][2]) is a homomorphism onto Z^2 whose
// kernel is the free abelian group of maps first layer -> third layer
IaModel free23_model() {
  IaModel m;
  m.delta = make_hull(group_from_recipe("free-hull 2 3"));
  auto delta = m.delta;
  auto elementary = [delta](std::size_t i, std::size_t j) {
    QMatrix rows(2, 5);
    rows(0, 0) = rows(1, 1) = 1;
    rows(i, j) += 1;
    auto A = extend_first_layer(*delta, rows);
    if (!A) throw Error("elementary IA* element is not integral");
    return *A;
  };
  ZMatrix Ea = elementary(0, 2), Eb = elementary(1, 2);
  m.r = 2;
  m.coords = [](const ZMatrix& A) { return ZVector{A(0, 2), A(1, 2)}; };
  m.lift = [Ea, Eb](const ZVector& v) { return matrix_power(Ea, v[0]) * matrix_power(Eb, v[1]); };
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 3; j < 5; ++j) m.kernel_gens.push_back(elementary(i, j));
  return m;
}

IaSubgroup subgroup_of(const std::string& name, const IaModel& model, const std::vector<ZVector>& lattice_gens) {
  IaSubgroup h;
  h.name = name;
  h.delta = model.delta;
  ZMatrix rows = ZMatrix::from_rows(lattice_gens, model.r);
  Lattice M = Lattice::span_integer(model.r, rows);
  if (!M.full_rank()) throw Error("subgroup " + name + " has infinite index");
  h.index = lattice_index(Lattice::standard(model.r), M).get_ui();
  for (const auto& v : lattice_gens) h.generators.push_back(model.lift(v));
  for (const auto& g : model.kernel_gens) h.generators.push_back(g);
  auto coords = model.coords;
  h.contains = [M, coords](const ZMatrix& A) { return M.contains(to_rational(coords(A))); };
  return h;
}

std::vector<ZVector> unit_rows(std::size_t r) {
  std::vector<ZVector> out(r, ZVector(r, Integer(0)));
  for (std::size_t i = 0; i < r; ++i) out[i][i] = 1;
  return out;
}

}  // namespace

std::vector<IaSubgroup> csp_test_subgroups() {
  std::vector<IaSubgroup> out;
  auto Z = [](std::initializer_list<long> v) {
    ZVector z;
    for (long x : v) z.push_back(Integer(x));
    return z;
  };
  IaModel heis = class_two_model("heisenberg");
  out.push_back(subgroup_of("heisenberg:full", heis, unit_rows(2)));
  out.push_back(subgroup_of("heisenberg:<(2,0),(0,1)>", heis, {Z({2, 0}), Z({0, 1})}));
  out.push_back(subgroup_of("heisenberg:a+b-even", heis, {Z({1, 1}), Z({0, 2})}));
  out.push_back(subgroup_of("heisenberg:<(3,0),(0,5)>", heis, {Z({3, 0}), Z({0, 5})}));
  out.push_back(subgroup_of("heisenberg:<(4,0),(0,4)>", heis, {Z({4, 0}), Z({0, 4})}));
  out.push_back(subgroup_of("heisenberg:<(1,2),(0,7)>", heis, {Z({1, 2}), Z({0, 7})}));
  out.push_back(subgroup_of("heisenberg:<(2,1),(0,6)>", heis, {Z({2, 1}), Z({0, 6})}));
  IaModel f22 = class_two_model("free-hull 2 2");
  out.push_back(subgroup_of("free-hull-2-2:<(1,0),(0,3)>", f22, {Z({1, 0}), Z({0, 3})}));
  IaModel f32 = class_two_model("free-hull 3 2");
  {
    auto rows = unit_rows(9);
    rows[0][0] = 2;
    out.push_back(subgroup_of("free-hull-3-2:A03-even", f32, rows));
    rows = unit_rows(9);
    for (std::size_t i = 0; i < 3; ++i) rows[i][i] = 2;
    out.push_back(subgroup_of("free-hull-3-2:row0-even", f32, rows));
    // A03 + A14 + A25 = 0 mod 3: coordinates 0, 4, 8
    rows = unit_rows(9);
    rows[0] = Z({1, 0, 0, 0, 0, 0, 0, 0, 2});
    rows[4] = Z({0, 0, 0, 0, 1, 0, 0, 0, 2});
    rows[8] = Z({0, 0, 0, 0, 0, 0, 0, 0, 3});
    out.push_back(subgroup_of("free-hull-3-2:trace-0-mod-3", f32, rows));
  }
  IaModel f23 = free23_model();
  out.push_back(subgroup_of("free-hull-2-3:full", f23, unit_rows(2)));
  out.push_back(subgroup_of("free-hull-2-3:A02-even", f23, {Z({2, 0}), Z({0, 1})}));
  out.push_back(subgroup_of("free-hull-2-3:A02=A12-mod-3", f23, {Z({1, 1}), Z({0, 3})}));
  out.push_back(subgroup_of("free-hull-2-3:both-even", f23, {Z({2, 0}), Z({0, 2})}));
  {
    IaSubgroup triv;
    triv.name = "abelian-2:full";
    triv.delta = integer_group(2);
    triv.generators = {ZMatrix::identity(2)};
    triv.index = 1;
    triv.contains = [](const ZMatrix&) { return true; };
    out.push_back(triv);
  }
  return out;
}

namespace {

void suite_csp(const VerifyOptions& opts, VerificationReport& rep) {
  rep.caps = {{"level_cap", opts.csp_level_cap}, {"membership_samples", opts.membership_samples}};
  auto subgroups = opts.subgroups.empty() ? csp_test_subgroups() : opts.subgroups;
  // the coordinate models behind the built-in subgroups are homomorphisms
  if (opts.subgroups.empty())
    rep.checks.push_back(run_check("ia-models", [&](CheckResult& r) {
      IaModel m = free23_model();
      std::vector<ZMatrix> gens = m.kernel_gens;
      gens.push_back(m.lift(ZVector{1, 0}));
      gens.push_back(m.lift(ZVector{0, 1}));
      for (const auto& g : gens) expect(r, is_ia_star(*m.delta, to_rational(g)), "model generator is not IA*");
      for (const auto& g : m.kernel_gens) expect(r, m.coords(g) == ZVector(2, Integer(0)), "kernel generator has coordinates");
      for (const auto& a : gens)
        for (const auto& b : gens) {
          ZVector ab = m.coords(a * b), sum = m.coords(a);
          for (std::size_t i = 0; i < 2; ++i) sum[i] += m.coords(b)[i];
          expect(r, ab == sum, "coordinates are not additive");
        }
      expect(r, ia_rank(*m.delta->basis_algebra()) == m.r + m.kernel_gens.size(), "model rank differs from the IA* rank");
    }));
  for (const auto& h : subgroups)
    rep.checks.push_back(run_check("csp:" + h.name, [&](CheckResult& r) {
      IaSystem sys(h.delta);
      auto res = csp_witness(sys, h.generators, h.index, opts.csp_level_cap);
      r.status = res.status;
      r.detail = res.note;
      r.data = {{"index", h.index}, {"m", res.m}, {"scale", res.scale}, {"group_order", res.group_order},
                {"image_order", res.image_order}};
      if (res.status != CheckStatus::pass || !h.contains) return;
      for (const auto& g : h.generators) expect(r, h.contains(g), "a generator fails the membership test");
      // random elements of the level-s kernel lie in H
      std::mt19937_64 rng(opts.seed);
      std::vector<std::int64_t> zero(sys.unknowns().size(), 0);
      std::size_t tested = 0;
      for (std::size_t i = 0; i < opts.membership_samples * 4 && tested < opts.membership_samples; ++i) {
        auto vals = random_lift(sys, zero, res.scale, rng);
        if (!vals) continue;
        ++tested;
        expect(r, h.contains(sys.matrix(*vals)), "a kernel element is not in H");
      }
      r.data["kernel_samples"] = tested;
      expect(r, tested == opts.membership_samples || sys.unknowns().empty(), "too few kernel samples");
    }));
}

// ---- fiber ----

void suite_fiber(const VerifyOptions& opts, VerificationReport& rep) {
  rep.caps = {{"level_cap", opts.fiber_level_cap}, {"aut_cap", opts.aut_cap}};
  const std::vector<TorsionEntry> fibers = opts.fibers.empty() ? torsion_catalog() : opts.fibers;
  for (const auto& e : fibers) {
    const FiberGroup& u = *e.group;
    rep.checks.push_back(run_check("torsion:" + e.name, [&](CheckResult& r) {
      std::size_t order = torsion_subgroup(u).group.order();
      expect(r, order == e.expected_torsion, "|tor| = " + std::to_string(order));
      r.data = {{"order", order}};
    }));
    rep.checks.push_back(run_check("find-t:" + e.name, [&](CheckResult& r) {
      std::int64_t t = find_t(u, opts.fiber_level_cap);
      expect(r, t == e.expected_t, "t = " + std::to_string(t));
      r.data = {{"t", t}};
    }));
    rep.checks.push_back(run_check("gamma-star:" + e.name, [&](CheckResult& r) {
      auto g = gamma_star_check(u);
      expect(r, g.ok, g.failure);
      expect(r, g.d == u.p1()->abelian_rank(), "d differs from the hull");
      r.data = {{"d", g.d}, {"free_rank", g.free_rank}};
    }));
    rep.checks.push_back(run_check("lift:" + e.name, [&](CheckResult& r) {
      auto sigma2s = automorphisms(u.p2(), opts.aut_cap);
      auto sigma1s = sample_automorphisms(*u.p1());
      const CongruenceQuotient& base = u.base_quotient();
      const std::int64_t s = base.scale();
      const std::int64_t S = level_scale(u, 2);
      std::size_t compatible = 0, rejected = 0;
      for (const auto& A : sigma1s) {
        std::vector<Element> act(base.order());
        for (Element c = 0; c < base.order(); ++c) {
          ZVector x = row_times(base.decode(c), A);
          for (auto& v : x) v = mod_floor(v, Integer(s));
          act[c] = base.encode(x);
        }
        for (const auto& s2 : sigma2s) {
          // direct oracle: sigma1 x sigma2 maps the finite fiber product to itself
          std::optional<std::pair<Element, Element>> bad;
          for (Element c = 0; c < base.order() && !bad; ++c)
            for (Element y = 0; y < u.p2().order() && !bad; ++y)
              if (u.pi1_code(c) == u.pi2(y) && u.pi1_code(act[c]) != u.pi2(s2[y])) bad = std::make_pair(c, y);
          auto la = lift_automorphism(u, A, s2);
          if (!bad) {
            ++compatible;
            expect(r, la.aut.has_value(), "compatible pair not lifted: " + la.error);
            if (!la.aut) continue;
            auto q = verify_on_quotient(u, [&](const FiberElement& g) { return la.aut->apply(g); }, S, opts.seed);
            expect(r, q.ok, "lift is not an automorphism: " + q.failure);
            auto p = verify_projections(u, *la.aut, S);
            expect(r, p.ok, "projection identity fails: " + p.failure);
          } else {
            ++rejected;
            expect(r, !la.aut && !la.error.empty(), "incompatible pair was lifted");
          }
        }
      }
      r.data = {{"sigma1", sigma1s.size()}, {"sigma2", sigma2s.size()}, {"compatible", compatible},
                {"rejected", rejected}};
    }));
    rep.checks.push_back(run_check("k-tilde:" + e.name, [&](CheckResult& r) {
      auto kt = ia_kernel_enum(u, u.standard_generators());
      expect(r, kt.closed, "K~ is not closed under composition");
      r.data = {{"order", kt.maps.size()}, {"scale", kt.scale}};
    }));
  }
  for (const char* name : {"z-x-z2-z4", "heisenberg-x-z3"}) {
    std::shared_ptr<const FiberGroup> u;
    for (const auto& e : fibers)
      if (e.name == name) u = e.group;
    if (!u) continue;
    std::int64_t t = find_t(*u, opts.fiber_level_cap);
    for (std::int64_t m = t; m <= opts.fiber_level_cap; m += t)
      rep.checks.push_back(run_check(std::string("rho:") + name + ":m=" + std::to_string(m), [&](CheckResult& r) {
        auto rho = check_rho(*u, m);
        expect(r, rho.injective, "rho is not injective");
        expect(r, rho.surjective, "rho is not surjective");
        r.data = {{"t", t}, {"scale", rho.scale}, {"f_order", rho.f_order}, {"gamma_m", rho.gamma_m_order},
                  {"delta_m", rho.delta_m_order}, {"image", rho.image_size}};
      }));
  }
}

// ---- free-iso ----

void suite_free(const VerifyOptions& opts, VerificationReport& rep) {
  rep.caps = {{"box", opts.iso_box}, {"pairs", opts.iso_pairs}};
  for (auto [n, c] : {std::pair<std::size_t, unsigned>{2, 2}, {2, 3}, {3, 2}}) {
    const std::string tag = std::to_string(n) + "-" + std::to_string(c);
    FreeNilpotent f(n, c);
    auto top = f.top_layer();
    const std::size_t rz = top.size(), k = f.dim();
    auto tuple_of = [&](const std::vector<long>& flat) {
      std::vector<QVector> u(n, zero_vector(k));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < rz; ++j) u[i][top[j]] = flat[i * rz + j];
      return u;
    };
    rep.checks.push_back(run_check("a-iso:" + tag, [&](CheckResult& r) {
      const long B = opts.iso_box;
      std::vector<long> flat(n * rz, -B);
      std::size_t count = 0;
      while (true) {
        auto u = tuple_of(flat);
        QMatrix A = a_backward(f, u);
        expect(r, a_forward(f, A) == u, "forward(backward(u)) != u");
        ++count;
        std::size_t pos = 0;
        while (pos < flat.size() && flat[pos] == B) flat[pos++] = -B;
        if (pos == flat.size()) break;
        ++flat[pos];
      }
      r.data = {{"tuples", count}, {"center_rank", rz}};
    }));
    rep.checks.push_back(run_check("composition:" + tag, [&](CheckResult& r) {
      std::mt19937_64 rng(opts.seed);
      std::uniform_int_distribution<long> dist(-opts.iso_box, opts.iso_box);
      auto random_tuple = [&] {
        std::vector<long> flat(n * rz);
        for (auto& v : flat) v = dist(rng);
        return tuple_of(flat);
      };
      for (std::size_t t = 0; t < opts.iso_pairs; ++t) {
        auto u = random_tuple(), v = random_tuple();
        QMatrix alpha = a_backward(f, u), beta = a_backward(f, v);
        // row convention: alpha then beta is alpha * beta
        auto w = a_forward(f, alpha * beta);
        for (std::size_t i = 0; i < n; ++i) expect(r, w[i] == add(u[i], v[i]), "(beta o alpha)(x_i) != x_i v_i u_i");
        expect(r, alpha * beta == beta * alpha, "A(Psi) is not abelian");
        // trivial on Psi modulo its center
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j)
            if (f.hall_basis()[j].weight < c) expect(r, alpha(i, j) == (i == j ? 1 : 0), "not trivial modulo the center");
      }
      // x_1 -> x_1 x_2 is an automorphism outside A(Psi)
      std::vector<QVector> images;
      for (std::size_t i = 0; i < n; ++i) images.push_back(unit_vector(k, i));
      images[0] = add(images[0], images[1]);
      bool rejected = false;
      try {
        a_forward(f, extend_generator_images(f, images));
      } catch (const InvalidInput&) {
        rejected = true;
      }
      expect(r, rejected, "a shear was accepted as an element of A(Psi)");
      r.data = {{"pairs", opts.iso_pairs}};
    }));
    rep.checks.push_back(run_check("section:" + tag, [&](CheckResult& r) {
      FreeNilpotent upper(n, c + 1);
      std::vector<std::vector<Word>> autos;
      std::vector<Word> id;
      for (std::size_t i = 0; i < n; ++i) id.push_back({{i, 1}});
      autos.push_back(id);
      auto t = id;
      t[0] = {{0, 1}, {1, 1}};
      autos.push_back(t);
      auto sw = id;
      std::swap(sw[0], sw[1]);
      autos.push_back(sw);
      auto inv = id;
      inv[1] = {{1, -1}};
      autos.push_back(inv);
      auto conj = id;
      conj[0] = {{1, 1}, {0, 1}, {1, -1}, {0, 1}, {1, 1}, {0, -1}, {1, -1}};
      autos.push_back(conj);
      for (const auto& w : autos) {
        auto lifted = aut_restriction(f, upper, w);
        expect(r, lifted.restricts, "restriction of the lift differs from the input");
        expect(r, is_lie_aut(*upper.algebra(), lifted.lie).ok, "lift is not a Lie automorphism");
      }
      auto bad = id;
      bad[0] = {{0, 2}};
      bool rejected = false;
      try {
        aut_restriction(f, upper, bad);
      } catch (const InvalidInput&) {
        rejected = true;
      }
      expect(r, rejected, "a non-automorphism was lifted");
      r.data = {{"automorphisms", autos.size()}};
    }));
  }
}

}  // namespace

CheckStatus VerificationReport::status() const {
  CheckStatus s = CheckStatus::pass;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::fail) return CheckStatus::fail;
    if (c.status == CheckStatus::inconclusive) s = CheckStatus::inconclusive;
  }
  return s;
}

Json VerificationReport::to_json() const {
  Json cs = Json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}, {"data", c.data},
                  {"seconds", c.seconds}});
  return {{"suite", suite}, {"status", to_string(status())}, {"seed", seed}, {"caps", caps},
          {"seconds", seconds}, {"checks", cs}};
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  out << "suite " << suite << ": " << to_string(status()) << " (" << checks.size() << " checks, " << std::fixed
      << std::setprecision(2) << seconds << " s)\n";
  for (const auto& c : checks) {
    out << "  " << std::left << std::setw(13) << to_string(c.status) << c.name << "  " << c.seconds << " s";
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
  }
  return out.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"bch-oracle", "hull", "basis", "ia-structure",
                                              "strong-approx", "csp", "fiber", "free-iso"};
  return names;
}

VerificationReport verify_suite(const std::string& suite, const VerifyOptions& opts) {
  VerificationReport rep;
  rep.suite = suite;
  rep.seed = opts.seed;
  auto t0 = Clock::now();
  if (suite == "bch-oracle")
    suite_bch(opts, rep);
  else if (suite == "hull")
    suite_hull(opts, rep);
  else if (suite == "basis")
    suite_basis(opts, rep);
  else if (suite == "ia-structure")
    suite_ia(opts, rep);
  else if (suite == "strong-approx")
    suite_strong(opts, rep);
  else if (suite == "csp")
    suite_csp(opts, rep);
  else if (suite == "fiber")
    suite_fiber(opts, rep);
  else if (suite == "free-iso")
    suite_free(opts, rep);
  else
    throw InvalidInput("unknown suite '" + suite + "'");
  rep.seconds = since(t0);
  return rep;
}

}  // namespace nilcsp
