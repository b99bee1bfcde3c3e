#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "nilcsp/free_nilpotent.hpp"
#include "nilcsp/verify.hpp"

using namespace nilcsp;

namespace {

enum Exit { ok = 0, check_failed = 1, usage = 2, inconclusive = 3 };

struct Settings {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::size_t cap_points = 5'000'000;
  std::size_t cap_quotient = 1'000'000;
  std::size_t cap_enumerate = 1'000'000;
  std::size_t cap_rounds = 64;
  std::int64_t cap_level = 16;
};

void print_text(const Json& j, const std::string& indent = "") {
  if (!j.is_object()) {
    std::cout << indent << j.dump() << "\n";
    return;
  }
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      std::cout << indent << key << ":\n";
      print_text(value, indent + "  ");
    } else {
      std::cout << indent << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    }
  }
}

void emit(const Settings& s, const Json& j) {
  if (s.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    print_text(j);
}

Json parse_inline(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(what + ": " + e.what());
  }
}

// file path or inline JSON
Json json_argument(const std::string& arg, const std::string& what) {
  if (!arg.empty() && (arg[0] == '[' || arg[0] == '{')) return parse_inline(arg, what);
  return load_json_file(arg);
}

struct GroupInput {
  std::string file, recipe;
  void add(CLI::App* cmd) {
    auto* g = cmd->add_option("--group", file, "group interchange file");
    auto* r = cmd->add_option("--recipe", recipe, "catalog recipe, e.g. \"free 2 3\"");
    g->excludes(r);
  }
  GenGroup load() const {
    if (!file.empty()) return group_from_json(load_json_file(file));
    if (!recipe.empty()) return group_from_recipe(recipe);
    throw InvalidInput("one of --group or --recipe is required");
  }
};

Json basis_json(const LatticeGroup& D) {
  Json basis = Json::array();
  for (const auto& b : D.basis()) basis.push_back(vector_to_json(b));
  return basis;
}

int status_exit(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return ok;
    case CheckStatus::fail: return check_failed;
    case CheckStatus::inconclusive: return inconclusive;
  }
  return check_failed;
}

std::vector<Element> element_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidInput(what + ": expected an array of elements");
  std::vector<Element> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) throw InvalidInput(what + ": expected non-negative integers");
    out.push_back(v.get<Element>());
  }
  return out;
}

std::vector<FiberElement> fiber_elements(const Json& j, std::size_t dim) {
  if (!j.is_array()) throw InvalidInput("generators: expected an array of {\"x\": [...], \"y\": n}");
  std::vector<FiberElement> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = "generators/" + std::to_string(i);
    if (!j[i].is_object() || !j[i].contains("x") || !j[i].contains("y")) throw InvalidInput(w + ": expected x and y");
    FiberElement g;
    for (const auto& q : vector_from_json(j[i]["x"], dim, w + "/x")) {
      if (q.get_den() != 1) throw InvalidInput(w + "/x: expected integers");
      g.x.push_back(q.get_num());
    }
    g.y = element_list(Json::array({j[i]["y"]}), w + "/y")[0];
    out.push_back(g);
  }
  return out;
}

Json fiber_element_json(const FiberElement& g) {
  Json x = Json::array();
  for (const auto& v : g.x) x.push_back(to_json(v));
  return {{"x", x}, {"y", g.y}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with finitely generated nilpotent groups"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  Settings s;
  app.add_option("--seed", s.seed, "seed for sampled checks")->capture_default_str();
  app.add_option("--format", s.format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--cap-points", s.cap_points, "mod-m point cap")->capture_default_str();
  app.add_option("--cap-quotient", s.cap_quotient, "finite quotient order cap")->capture_default_str();
  app.add_option("--cap-enumerate", s.cap_enumerate, "IA* enumeration cap")->capture_default_str();
  app.add_option("--cap-rounds", s.cap_rounds, "hull closure rounds")->capture_default_str();
  app.add_option("--cap-level", s.cap_level, "largest level searched")->capture_default_str();

  std::function<int()> action;

  // ---- lie-core ----
  std::string algebra_file, x_arg, y_arg, matrix_arg;
  auto* bch_cmd = app.add_subcommand("bch", "BCH product of two algebra elements");
  bch_cmd->add_option("--algebra", algebra_file, "algebra interchange file")->required();
  bch_cmd->add_option("--x", x_arg, "JSON vector")->required();
  bch_cmd->add_option("--y", y_arg, "JSON vector")->required();
  bch_cmd->callback([&] {
    action = [&] {
      LieAlgebra L = algebra_from_json(load_json_file(algebra_file));
      QVector x = vector_from_json(parse_inline(x_arg, "--x"), L.dim(), "--x");
      QVector y = vector_from_json(parse_inline(y_arg, "--y"), L.dim(), "--y");
      emit(s, {{"bch", vector_to_json(bch(L, x, y))}});
      return ok;
    };
  });
  auto* log_cmd = app.add_subcommand("log", "logarithm of a unitriangular matrix");
  log_cmd->add_option("--matrix", matrix_arg, "matrix document {k, matrix} (file or inline)")->required();
  log_cmd->callback([&] {
    action = [&] {
      QMatrix U = automorphism_from_json(json_argument(matrix_arg, "--matrix"));
      emit(s, automorphism_to_json(matrix_log(U)));
      return ok;
    };
  });
  auto* exp_cmd = app.add_subcommand("exp", "exponential of a nilpotent matrix");
  exp_cmd->add_option("--matrix", matrix_arg, "matrix document {k, matrix} (file or inline)")->required();
  exp_cmd->callback([&] {
    action = [&] {
      QMatrix N = automorphism_from_json(json_argument(matrix_arg, "--matrix"));
      emit(s, automorphism_to_json(matrix_exp(N)));
      return ok;
    };
  });

  // ---- malcev-hull ----
  GroupInput hull_in, basis_in, quot_in, ia_in;
  auto* hull_cmd = app.add_subcommand("hull", "lattice hull of a group");
  hull_in.add(hull_cmd);
  hull_cmd->callback([&] {
    action = [&] {
      GenGroup g = hull_in.load();
      HullOptions ho;
      ho.max_rounds = s.cap_rounds;
      LatticeGroup D = lattice_hull(g, ho);
      Json out = {{"lattice", lattice_to_json(D.lattice())},
                  {"basis", basis_json(D)},
                  {"layers", D.layer_sizes()},
                  {"d", delta_data(D).d},
                  {"rounds", D.rounds}};
      out["index"] = g.filtered ? Json(to_json(hull_index(g, D))) : Json("unsupported input form");
      emit(s, out);
      return ok;
    };
  });
  auto* basis_cmd = app.add_subcommand("basis", "adapted basis and integral structure constants");
  basis_in.add(basis_cmd);
  basis_cmd->callback([&] {
    action = [&] {
      LatticeGroup D = lattice_hull(basis_in.load());
      Json layer_of = Json::array();
      for (std::size_t i = 0; i < D.dim(); ++i) layer_of.push_back(D.layer_of(i));
      auto dd = delta_data(D);
      emit(s, {{"basis", basis_json(D)},
               {"layers", D.layer_sizes()},
               {"layer_of", layer_of},
               {"d", dd.d},
               {"derived", lattice_to_json(dd.derived)},
               {"structure", algebra_to_json(*D.basis_algebra())}});
      return ok;
    };
  });
  std::int64_t quot_m = 2;
  bool with_cayley = false;
  auto* quot_cmd = app.add_subcommand("quotient", "finite quotient of the hull at level m");
  quot_in.add(quot_cmd);
  quot_cmd->add_option("--m", quot_m, "level")->required()->check(CLI::PositiveNumber);
  quot_cmd->add_flag("--cayley", with_cayley, "include the Cayley table");
  quot_cmd->callback([&] {
    action = [&] {
      auto D = make_hull(quot_in.load());
      CongruenceLevel lv = congruence_level(*D, Integer(quot_m));
      if (!lv.scale.fits_slong_p()) throw CapExceeded("level scale too large");
      Lattice sub = D->lattice().scaled(Rational(lv.scale));
      Integer order = lattice_index(D->lattice(), sub);
      Json out = {{"m", quot_m}, {"D", to_json(lv.D)}, {"scale", to_json(lv.scale)},
                  {"order", to_json(order)}, {"sublattice", lattice_to_json(sub)}};
      if (with_cayley) {
        if (order > s.cap_quotient) throw CapExceeded("quotient order exceeds --cap-quotient");
        CongruenceQuotient q(D, lv.scale.get_si());
        out["group"] = finite_group_to_json(q.group().materialized(s.cap_quotient));
      }
      emit(s, out);
      return ok;
    };
  });
  std::int64_t ia_bound = 1;
  auto* ia_cmd = app.add_subcommand("ia-enumerate", "IA* elements of the hull with entries in [-N, N]");
  ia_in.add(ia_cmd);
  ia_cmd->add_option("--bound", ia_bound, "entry bound N")->capture_default_str()->check(CLI::NonNegativeNumber);
  ia_cmd->callback([&] {
    action = [&] {
      IaSystem sys(make_hull(ia_in.load()));
      EnumerateOptions eo;
      eo.cap = s.cap_enumerate;
      auto list = enumerate_ia_star(sys, ia_bound, eo);
      Json items = Json::array();
      for (const auto& A : list) items.push_back(automorphism_to_json(to_rational(A)));
      emit(s, {{"bound", ia_bound}, {"count", list.size()}, {"ia_rank", ia_rank(*sys.delta().basis_algebra())},
               {"elements", items}});
      return ok;
    };
  });

  // ---- verify ----
  std::string suite, catalog_arg = "default", subgroup_file;
  std::optional<std::int64_t> verify_m;
  std::optional<std::int64_t> csp_cap;
  bool naive = false;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  std::vector<std::string> suites = suite_names();
  suites.push_back("all");
  verify_cmd->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suites));
  verify_cmd->add_option("--catalog", catalog_arg, "\"default\" or a catalog file")->capture_default_str();
  verify_cmd->add_option("--m", verify_m, "single level for strong-approx")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--subgroup", subgroup_file, "csp subgroup file");
  verify_cmd->add_option("--cap", csp_cap, "csp level cap")->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--naive", naive, "also count solutions of the Lie equations alone");
  verify_cmd->callback([&] {
    action = [&] {
      VerifyOptions vo;
      vo.seed = s.seed;
      vo.point_cap = s.cap_points;
      vo.csp_level_cap = csp_cap.value_or(s.cap_level);
      vo.only_level = verify_m;
      vo.naive_counts = naive;
      if (catalog_arg != "default") {
        Json j = load_json_file(catalog_arg);
        vo.catalog = catalog_from_json(j);
        vo.fibers = fiber_entries_from_json(j, std::filesystem::path(catalog_arg).parent_path());
        if (vo.catalog.empty() && vo.fibers.empty()) throw InvalidInput(catalog_arg + ": catalog has no entries");
      }
      if (!subgroup_file.empty()) {
        Json j = load_json_file(subgroup_file);
        IaSubgroup h;
        h.name = j.value("name", subgroup_file);
        GenGroup g = j.contains("group") ? group_from_json(j["group"])
                                         : group_from_recipe(j.value("recipe", std::string()));
        h.delta = make_hull(g);
        if (!j.contains("index") || !j["index"].is_number_unsigned()) throw InvalidInput("subgroup file needs an index");
        h.index = j["index"].get<std::size_t>();
        if (!j.contains("generators") || !j["generators"].is_array()) throw InvalidInput("subgroup file needs generators");
        for (const auto& A : j["generators"]) h.generators.push_back(to_integer(automorphism_from_json(A)));
        vo.subgroups.push_back(h);
      }
      std::vector<std::string> run = suite == "all" ? suite_names() : std::vector<std::string>{suite};
      Json reports = Json::array();
      CheckStatus worst = CheckStatus::pass;
      for (const auto& name : run) {
        auto rep = verify_suite(name, vo);
        if (s.format == "text") std::cout << rep.to_text() << std::flush;
        reports.push_back(rep.to_json());
        if (rep.status() == CheckStatus::fail)
          worst = CheckStatus::fail;
        else if (rep.status() == CheckStatus::inconclusive && worst == CheckStatus::pass)
          worst = CheckStatus::inconclusive;
      }
      if (s.format == "json") std::cout << (run.size() == 1 ? reports[0] : Json{{"reports", reports}}).dump(2) << "\n";
      return status_exit(worst);
    };
  });

  // ---- free-nilpotent ----
  std::size_t free_n = 2;
  unsigned free_c = 2;
  std::string tuple_arg, aut_arg;
  auto* free_cmd = app.add_subcommand("free", "free nilpotent groups");
  free_cmd->require_subcommand(1);
  auto add_nc = [&](CLI::App* cmd) {
    cmd->add_option("--n", free_n, "rank")->required()->check(CLI::Range(1, 9));
    cmd->add_option("--c", free_c, "class")->required()->check(CLI::Range(1, 12));
  };
  auto* free_alg = free_cmd->add_subcommand("algebra", "Hall basis and structure constants");
  add_nc(free_alg);
  free_alg->callback([&] {
    action = [&] {
      FreeNilpotent f(free_n, free_c);
      Json labels = Json::array();
      for (std::size_t i = 0; i < f.dim(); ++i) labels.push_back(f.label(i));
      Json out = algebra_to_json(*f.algebra());
      out["hall_basis"] = labels;
      emit(s, out);
      return ok;
    };
  });
  auto* free_psi = free_cmd->add_subcommand("psi", "the group generated by exp(x_i), with its hull");
  add_nc(free_psi);
  free_psi->callback([&] {
    action = [&] {
      FreeNilpotent f(free_n, free_c);
      LatticeGroup D = lattice_hull(f.psi_malcev());
      Json out = group_to_json(f.psi());
      out["hull"] = {{"lattice", lattice_to_json(D.lattice())}, {"index", to_json(hull_index(f.psi_malcev(), D))},
                     {"d", delta_data(D).d}};
      emit(s, out);
      return ok;
    };
  });
  auto* free_center = free_cmd->add_subcommand("center", "centers of psi and of its hull");
  add_nc(free_center);
  free_center->callback([&] {
    action = [&] {
      FreeNilpotent f(free_n, free_c);
      auto cd = center(f, lattice_hull(f.psi_malcev()));
      Json z = Json::array();
      for (const auto& v : cd.algebra_center) z.push_back(vector_to_json(v));
      emit(s, {{"algebra_center", z}, {"rank", cd.algebra_center.size()},
               {"hull_center", lattice_to_json(cd.hull_center)}, {"group_center", lattice_to_json(cd.group_center)}});
      return ok;
    };
  });
  auto* free_aiso = free_cmd->add_subcommand("a-iso", "A(Psi) <-> Z(Psi)^n in either direction");
  add_nc(free_aiso);
  auto* t_opt = free_aiso->add_option("--tuple", tuple_arg, "JSON list of n central logs");
  auto* a_opt = free_aiso->add_option("--automorphism", aut_arg, "automorphism document (file or inline)");
  t_opt->excludes(a_opt);
  free_aiso->callback([&] {
    action = [&] {
      FreeNilpotent f(free_n, free_c);
      if (!tuple_arg.empty()) {
        Json j = parse_inline(tuple_arg, "--tuple");
        if (!j.is_array() || j.size() != free_n) throw InvalidInput("--tuple: expected " + std::to_string(free_n) + " vectors");
        std::vector<QVector> u;
        for (std::size_t i = 0; i < j.size(); ++i) u.push_back(vector_from_json(j[i], f.dim(), "--tuple/" + std::to_string(i)));
        emit(s, automorphism_to_json(a_backward(f, u)));
        return ok;
      }
      if (aut_arg.empty()) throw InvalidInput("one of --tuple or --automorphism is required");
      Json tuple = Json::array();
      for (const auto& v : a_forward(f, automorphism_from_json(json_argument(aut_arg, "--automorphism"))))
        tuple.push_back(vector_to_json(v));
      emit(s, {{"tuple", tuple}});
      return ok;
    };
  });

  // ---- torsion-fiber ----
  std::string fiber_file, sigma1_arg, sigma2_arg, gens_arg;
  std::int64_t t_cap = 12;
  auto* fiber_cmd = app.add_subcommand("fiber", "fiber products P1 x_Q P2");
  fiber_cmd->require_subcommand(1);
  auto load_fiber = [&] {
    return fiber_from_json(load_json_file(fiber_file), std::filesystem::path(fiber_file).parent_path());
  };
  auto* fb = fiber_cmd->add_subcommand("build", "validate a fiber product and describe it");
  fb->add_option("--fiber", fiber_file, "fiber file")->required();
  fb->callback([&] {
    action = [&] {
      FiberGroup u = load_fiber();
      Json gens = Json::array();
      for (const auto& g : u.standard_generators()) gens.push_back(fiber_element_json(g));
      emit(s, {{"fiber", fiber_to_json(u)}, {"dim", u.dim()}, {"base_scale", u.base_scale()},
               {"p2_exponent", u.p2_exponent()}, {"generators", gens}});
      return ok;
    };
  });
  auto* ft = fiber_cmd->add_subcommand("tor", "torsion subgroup");
  ft->add_option("--fiber", fiber_file, "fiber file")->required();
  ft->callback([&] {
    action = [&] {
      auto tor = torsion_subgroup(load_fiber());
      emit(s, {{"order", tor.group.order()}, {"elements", tor.embedding}, {"group", finite_group_to_json(tor.group)}});
      return ok;
    };
  });
  auto* ftt = fiber_cmd->add_subcommand("find-t", "level t separating the torsion");
  ftt->add_option("--fiber", fiber_file, "fiber file")->required();
  ftt->add_option("--cap", t_cap, "largest t tried")->capture_default_str()->check(CLI::PositiveNumber);
  ftt->callback([&] {
    action = [&] {
      FiberGroup u = load_fiber();
      std::int64_t t = find_t(u, t_cap);
      emit(s, {{"t", t}, {"scale", level_scale(u, t)}});
      return ok;
    };
  });
  auto* fl = fiber_cmd->add_subcommand("lift", "lift (sigma1, sigma2) to an automorphism of U");
  fl->add_option("--fiber", fiber_file, "fiber file")->required();
  fl->add_option("--sigma1", sigma1_arg, "integral automorphism document in adapted coordinates")->required();
  fl->add_option("--sigma2", sigma2_arg, "JSON element map of P2")->required();
  fl->callback([&] {
    action = [&] {
      FiberGroup u = load_fiber();
      ZMatrix A = to_integer(automorphism_from_json(json_argument(sigma1_arg, "--sigma1")));
      auto sigma2 = element_list(parse_inline(sigma2_arg, "--sigma2"), "--sigma2");
      auto la = lift_automorphism(u, A, sigma2);
      Json out = {{"lifted", la.aut.has_value()}};
      if (!la.aut) {
        out["error"] = la.error;
        if (la.witness) out["witness"] = *la.witness;
        emit(s, out);
        return check_failed;
      }
      std::int64_t S = level_scale(u, 2);
      auto q = verify_on_quotient(u, [&](const FiberElement& g) { return la.aut->apply(g); }, S, s.seed);
      auto p = verify_projections(u, *la.aut, S);
      out["automorphism_check"] = {{"ok", q.ok}, {"failure", q.failure}, {"scale", S}};
      out["projection_check"] = {{"ok", p.ok}, {"failure", p.failure}};
      emit(s, out);
      return q.ok && p.ok ? ok : check_failed;
    };
  });
  auto* fk = fiber_cmd->add_subcommand("k-tilde", "maps g_i -> g_i a_i with a_i torsion that are automorphisms");
  fk->add_option("--fiber", fiber_file, "fiber file")->required();
  fk->add_option("--generators", gens_arg, "JSON list of {x, y}; default: the standard generators");
  fk->callback([&] {
    action = [&] {
      FiberGroup u = load_fiber();
      auto gens = gens_arg.empty() ? u.standard_generators() : fiber_elements(parse_inline(gens_arg, "--generators"), u.dim());
      auto kt = ia_kernel_enum(u, gens);
      emit(s, {{"order", kt.maps.size()}, {"tuples", kt.tuples}, {"closed", kt.closed}, {"scale", kt.scale}});
      return kt.closed ? ok : check_failed;
    };
  });

  std::string export_dir;
  auto* cat_cmd = app.add_subcommand("catalog", "print the built-in example catalog");
  cat_cmd->add_option("--export", export_dir, "write catalog.json, groups/ and fibers/ into this directory");
  cat_cmd->callback([&] {
    action = [&] {
      auto entries = default_catalog();
      Json j = catalog_to_json(entries);
      if (!export_dir.empty()) {
        namespace fs = std::filesystem;
        const fs::path dir(export_dir);
        fs::create_directories(dir / "groups");
        fs::create_directories(dir / "fibers");
        auto write = [](const fs::path& p, const Json& doc) {
          std::ofstream out(p);
          if (!out) throw InvalidInput("cannot write " + p.string());
          out << doc.dump(2) << "\n";
        };
        for (const auto& e : entries) write(dir / "groups" / (e.name + ".json"), group_to_json(e.group));
        for (const auto& e : torsion_catalog()) {
          const std::string rel = "fibers/" + e.name + ".json";
          write(dir / rel, fiber_to_json(*e.group));
          j["entries"].push_back(fiber_entry_to_json(e, rel));
        }
        write(dir / "catalog.json", j);
        return ok;
      }
      for (const auto& e : torsion_catalog())
        j["entries"].push_back(fiber_entry_to_json(e, "fibers/" + e.name + ".json"));
      std::cout << j.dump(2) << "\n";
      return ok;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }
  try {
    return action();
  } catch (const CapExceeded& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return inconclusive;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return check_failed;
  }
}
