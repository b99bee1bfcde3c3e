#include "nilcsp/io.hpp"

#include <fstream>
#include <limits>

namespace nilcsp {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidInput("at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::size_t size_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

const Json& array_at(const Json& j, const std::string& where, std::optional<std::size_t> len = {}) {
  if (!j.is_array()) fail(where, "expected an array");
  if (len && j.size() != *len)
    fail(where, "expected " + std::to_string(*len) + " entries, found " + std::to_string(j.size()));
  return j;
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

Json resolve(const Json& j, const std::filesystem::path& base) {
  if (j.is_string()) return load_json_file(base / j.get<std::string>());
  return j;
}

std::vector<Element> elements_from_json(const Json& j, std::size_t order, const std::string& where) {
  array_at(j, where);
  std::vector<Element> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::size_t v = size_from_json(j[i], at(where, i));
    if (v >= order) fail(at(where, i), "element " + std::to_string(v) + " out of range");
    out.push_back(static_cast<Element>(v));
  }
  return out;
}

}  // namespace

Json to_json(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_num().get_str() + "/" + q.get_den().get_str();
}

Json to_json(const Integer& z) {
  if (z.fits_slong_p()) return static_cast<long long>(z.get_si());
  return z.get_str();
}

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (!j.is_string()) fail(where, "expected a rational as \"num/den\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const InvalidInput& e) {
    fail(where, e.what());
  }
}

Integer integer_from_json(const Json& j, const std::string& where) {
  Rational q = rational_from_json(j, where);
  if (q.get_den() != 1) fail(where, "expected an integer");
  return q.get_num();
}

Json lattice_to_json(const Lattice& l) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < l.rank(); ++i) {
    Json r = Json::array();
    for (std::size_t c = 0; c < l.dim(); ++c) r.push_back(to_json(l.numerators()(i, c)));
    rows.push_back(r);
  }
  return {{"dim", l.dim()}, {"den", to_json(l.denominator())}, {"rows", rows}};
}

Lattice lattice_from_json(const Json& j) {
  std::size_t dim = size_from_json(field(j, "dim", ""), "/dim");
  Integer den = integer_from_json(field(j, "den", ""), "/den");
  if (den <= 0) fail("/den", "denominator must be positive");
  const Json& rows = array_at(field(j, "rows", ""), "/rows");
  ZMatrix m(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    array_at(rows[i], at("/rows", i), dim);
    for (std::size_t c = 0; c < dim; ++c) m(i, c) = integer_from_json(rows[i][c], at(at("/rows", i), c));
  }
  return Lattice::from_numerators(dim, den, m);
}

Json vector_to_json(const QVector& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_json(q));
  return a;
}

QVector vector_from_json(const Json& j, std::size_t dim, const std::string& where) {
  array_at(j, where, dim);
  QVector v;
  for (std::size_t i = 0; i < dim; ++i) v.push_back(rational_from_json(j[i], at(where, i)));
  return v;
}

Json matrix_to_json(const ZMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) r.push_back(to_json(m(i, c)));
    a.push_back(r);
  }
  return a;
}

Json matrix_to_json(const QMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_to_json(m.row_vector(i)));
  return a;
}

Json algebra_to_json(const LieAlgebra& L) {
  Json br = Json::array();
  for (const auto& b : L.nonzero_brackets()) br.push_back({b.i, b.j, vector_to_json(b.value)});
  return {{"dim", L.dim()}, {"class", L.declared_class()}, {"brackets", br}};
}

LieAlgebra algebra_from_json(const Json& j) {
  std::size_t dim = size_from_json(field(j, "dim", ""), "/dim");
  std::size_t cls = size_from_json(field(j, "class", ""), "/class");
  const Json& br = array_at(field(j, "brackets", ""), "/brackets");
  std::vector<Bracket> brackets;
  for (std::size_t n = 0; n < br.size(); ++n) {
    std::string w = at("/brackets", n);
    array_at(br[n], w, 3);
    std::size_t i = size_from_json(br[n][0], at(w, 0)), k = size_from_json(br[n][1], at(w, 1));
    if (!(i < k && k < dim)) fail(w, "bracket indices must satisfy i < j < dim");
    brackets.push_back({i, k, vector_from_json(br[n][2], dim, at(w, 2))});
  }
  try {
    return LieAlgebra::from_brackets(dim, static_cast<unsigned>(cls), brackets);
  } catch (const Error& e) {
    fail("/brackets", e.what());
  }
}

Json group_to_json(const GenGroup& g) {
  Json gens = Json::array();
  for (const auto& v : g.generators) gens.push_back(vector_to_json(v));
  return {{"algebra", algebra_to_json(*g.algebra)}, {"generators", gens}, {"filtered", g.filtered}};
}

GenGroup group_from_json(const Json& j) {
  GenGroup g;
  try {
    g.algebra = std::make_shared<const LieAlgebra>(algebra_from_json(field(j, "algebra", "")));
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("in /algebra ") + e.what());
  }
  const Json& gens = array_at(field(j, "generators", ""), "/generators");
  if (gens.empty()) fail("/generators", "generator list is empty");
  for (std::size_t i = 0; i < gens.size(); ++i)
    g.generators.push_back(vector_from_json(gens[i], g.algebra->dim(), at("/generators", i)));
  if (j.contains("filtered")) {
    if (!j["filtered"].is_boolean()) fail("/filtered", "expected a boolean");
    g.filtered = j["filtered"].get<bool>();
  }
  return g;
}

Json automorphism_to_json(const QMatrix& A) { return {{"k", A.rows()}, {"matrix", matrix_to_json(A)}}; }

QMatrix automorphism_from_json(const Json& j) {
  std::size_t k = size_from_json(field(j, "k", ""), "/k");
  const Json& rows = array_at(field(j, "matrix", ""), "/matrix", k);
  QMatrix A(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    QVector r = vector_from_json(rows[i], k, at("/matrix", i));
    for (std::size_t c = 0; c < k; ++c) A(i, c) = r[c];
  }
  return A;
}

Json finite_group_to_json(const FiniteGroup& g) {
  return {{"order", g.order()}, {"cayley", g.cayley()}};
}

FiniteGroup finite_group_from_json(const Json& j) {
  std::size_t order = size_from_json(field(j, "order", ""), "/order");
  if (order == 0 || order > std::numeric_limits<Element>::max()) fail("/order", "order out of range");
  const Json& rows = array_at(field(j, "cayley", ""), "/cayley", order);
  std::vector<std::vector<Element>> table;
  for (std::size_t i = 0; i < order; ++i) {
    array_at(rows[i], at("/cayley", i), order);
    table.push_back(elements_from_json(rows[i], order, at("/cayley", i)));
  }
  FiniteGroup g;
  try {
    g = FiniteGroup::from_table(table);
  } catch (const Error& e) {
    fail("/cayley", e.what());
  }
  auto rep = check_group_axioms(g, 0, order);
  if (!rep.ok) fail("/cayley", rep.failure);
  return g;
}

FiberGroup fiber_from_json(const Json& j, const std::filesystem::path& base_dir) {
  auto part = [&](const char* key) {
    try {
      return resolve(field(j, key, ""), base_dir);
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string("in /") + key + " " + e.what());
    }
  };
  auto inner = [](const char* key, auto&& fn) {
    try {
      return fn();
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string("in /") + key + " " + e.what());
    }
  };
  Json p1doc = part("p1"), p2doc = part("p2"), qdoc = part("q"), pi1doc = part("pi1"), pi2doc = part("pi2");
  auto p1 = inner("p1", [&] { return std::make_shared<const LatticeGroup>(lattice_hull(group_from_json(p1doc))); });
  FiniteGroup p2 = inner("p2", [&] { return finite_group_from_json(p2doc); });
  FiniteGroup q = inner("q", [&] { return finite_group_from_json(qdoc); });
  auto pi1 = inner("pi1", [&] { return elements_from_json(field(pi1doc, "images", ""), q.order(), "/images"); });
  auto gens = inner("pi2", [&] { return elements_from_json(field(pi2doc, "generators", ""), p2.order(), "/generators"); });
  auto imgs = inner("pi2", [&] { return elements_from_json(field(pi2doc, "images", ""), q.order(), "/images"); });
  try {
    return FiberGroup(p1, p2, q, pi1, gens, imgs);
  } catch (const Error& e) {
    throw InvalidInput(std::string("at /: ") + e.what());
  }
}

Json fiber_to_json(const FiberGroup& u) {
  GenGroup basis{u.p1()->algebra(), u.p1()->basis(), true};
  return {{"p1", group_to_json(basis)},
          {"p2", finite_group_to_json(u.p2())},
          {"q", finite_group_to_json(u.q())},
          {"pi1", {{"images", u.pi1_images()}}},
          {"pi2", {{"generators", u.p2_generators()}, {"images", u.p2_images()}}}};
}

Json catalog_to_json(const std::vector<CatalogEntry>& entries) {
  Json list = Json::array();
  for (const auto& e : entries) {
    Json expected = Json::object();
    auto put = [&](const char* key, const std::optional<Expected>& v) {
      if (v) expected[key] = {{"value", v->value}, {"provenance", v->provenance}};
    };
    put("hull_index", e.hull_index);
    put("d", e.d);
    put("k", e.k);
    put("ia_rank", e.ia_rank);
    list.push_back({{"name", e.name}, {"recipe", e.recipe}, {"witt_layers", e.witt_layers}, {"expected", expected}});
  }
  return {{"entries", list}};
}

std::vector<CatalogEntry> catalog_from_json(const Json& j) {
  const Json& list = array_at(field(j, "entries", ""), "/entries");
  std::vector<CatalogEntry> out;
  for (std::size_t n = 0; n < list.size(); ++n) {
    const std::string w = at("/entries", n);
    CatalogEntry e;
    const Json& name = field(list[n], "name", w);
    const Json& recipe = field(list[n], "recipe", w);
    if (!name.is_string()) fail(at(w, "name"), "expected a string");
    if (!recipe.is_string()) fail(at(w, "recipe"), "expected a string");
    e.name = name.get<std::string>();
    e.recipe = recipe.get<std::string>();
    if (e.recipe.rfind("fiber ", 0) == 0) continue;
    try {
      e.group = group_from_recipe(e.recipe);
    } catch (const InvalidInput& err) {
      fail(at(w, "recipe"), err.what());
    }
    if (list[n].contains("witt_layers")) {
      const Json& wl = array_at(list[n]["witt_layers"], at(w, "witt_layers"));
      for (std::size_t i = 0; i < wl.size(); ++i) e.witt_layers.push_back(size_from_json(wl[i], at(at(w, "witt_layers"), i)));
    }
    if (list[n].contains("expected")) {
      const Json& ex = list[n]["expected"];
      const std::string we = at(w, "expected");
      if (!ex.is_object()) fail(we, "expected an object");
      for (auto& [key, slot] : std::vector<std::pair<std::string, std::optional<Expected>*>>{
               {"hull_index", &e.hull_index}, {"d", &e.d}, {"k", &e.k}, {"ia_rank", &e.ia_rank}}) {
        if (!ex.contains(key)) continue;
        const Json& v = field(ex[key], "value", at(we, key));
        const Json& p = field(ex[key], "provenance", at(we, key));
        if (!v.is_string() || !p.is_string()) fail(at(we, key), "value and provenance must be strings");
        std::string prov = p.get<std::string>();
        if (prov != "trivial" && prov != "derived") fail(at(at(we, key), "provenance"), "must be \"trivial\" or \"derived\"");
        *slot = Expected{v.get<std::string>(), prov};
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

Json fiber_entry_to_json(const TorsionEntry& e, const std::string& fiber_path) {
  Json expected = {{"t", {{"value", std::to_string(e.expected_t)}, {"provenance", "derived"}}},
                   {"torsion", {{"value", std::to_string(e.expected_torsion)}, {"provenance", "derived"}}}};
  return {{"name", e.name}, {"recipe", "fiber " + fiber_path}, {"expected", expected}};
}

std::vector<TorsionEntry> fiber_entries_from_json(const Json& j, const std::filesystem::path& base_dir) {
  const Json& list = array_at(field(j, "entries", ""), "/entries");
  std::vector<TorsionEntry> out;
  for (std::size_t n = 0; n < list.size(); ++n) {
    const std::string w = at("/entries", n);
    const Json& name = field(list[n], "name", w);
    const Json& recipe = field(list[n], "recipe", w);
    if (!name.is_string()) fail(at(w, "name"), "expected a string");
    if (!recipe.is_string()) fail(at(w, "recipe"), "expected a string");
    std::string r = recipe.get<std::string>();
    if (r.rfind("fiber ", 0) != 0) continue;
    TorsionEntry e;
    e.name = name.get<std::string>();
    std::filesystem::path path = base_dir / r.substr(6);
    try {
      e.group = std::make_shared<const FiberGroup>(fiber_from_json(load_json_file(path), path.parent_path()));
    } catch (const InvalidInput& err) {
      fail(at(w, "recipe"), err.what());
    } catch (const Error& err) {
      fail(at(w, "recipe"), err.what());
    }
    const std::string we = at(w, "expected");
    const Json& ex = field(list[n], "expected", w);
    for (auto [key, slot] : std::vector<std::pair<const char*, std::int64_t*>>{
             {"t", &e.expected_t}, {"torsion", nullptr}}) {
      const Json& v = field(field(ex, key, we), "value", at(we, key));
      if (!v.is_string()) fail(at(at(we, key), "value"), "expected a string");
      long long x = 0;
      try {
        x = std::stoll(v.get<std::string>());
      } catch (const std::exception&) {
        fail(at(at(we, key), "value"), "expected an integer");
      }
      if (x <= 0) fail(at(at(we, key), "value"), "expected a positive integer");
      if (slot) *slot = x;
      else e.expected_torsion = static_cast<std::size_t>(x);
    }
    out.push_back(std::move(e));
  }
  return out;
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

}  // namespace nilcsp
