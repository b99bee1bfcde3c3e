#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "nilcsp/io.hpp"
#include "nilcsp/verify.hpp"

using namespace nilcsp;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NILCSP_CLI) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string temp_file(const std::string& name, const std::string& text) {
  std::string path = std::string(NILCSP_TMP) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("scalars round trip") {
  for (const char* s : {"0", "-7", "3/4", "-123456789012345678901234567890/7"}) {
    Rational q(s);
    q.canonicalize();
    CHECK(rational_from_json(to_json(q), "/") == q);
  }
  Integer big("-98765432109876543210987654321");
  CHECK(integer_from_json(to_json(big), "/") == big);
  CHECK(integer_from_json(Json(12), "/") == 12);
  CHECK(rational_from_json(Json(-3), "/") == -3);
  CHECK(error_of([] { rational_from_json(Json("1/0"), "/x"); }).find("/x") != std::string::npos);
  CHECK(error_of([] { rational_from_json(Json("2/x"), "/y"); }).find("/y") != std::string::npos);
  CHECK(error_of([] { integer_from_json(Json("1/2"), "/z"); }).find("/z") != std::string::npos);
}

TEST_CASE("catalog documents round trip exactly") {
  for (const auto& e : default_catalog()) {
    CAPTURE(e.name);
    LatticeGroup D = lattice_hull(e.group);
    Json lj = lattice_to_json(D.lattice());
    Lattice back = lattice_from_json(lj);
    CHECK(back == D.lattice());
    CHECK(lattice_to_json(back).dump() == lj.dump());

    Json aj = algebra_to_json(*e.group.algebra);
    CHECK(algebra_from_json(aj) == *e.group.algebra);
    CHECK(algebra_to_json(algebra_from_json(aj)).dump() == aj.dump());

    Json gj = group_to_json(e.group);
    GenGroup g = group_from_json(gj);
    CHECK(g.generators == e.group.generators);
    CHECK(g.filtered == e.group.filtered);
    CHECK(lattice_hull(g).lattice() == D.lattice());
  }
}

TEST_CASE("automorphism and finite group documents") {
  QMatrix A = QMatrix::identity(3);
  A(0, 2) = Rational(1, 2);
  A(1, 2) = -3;
  CHECK(automorphism_from_json(automorphism_to_json(A)) == A);
  CHECK_THROWS_AS(automorphism_from_json(Json{{"k", 2}, {"matrix", {{"1", "0"}}}}), InvalidInput);

  for (const auto& G : {FiniteGroup::cyclic(6), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4)}) {
    FiniteGroup H = finite_group_from_json(finite_group_to_json(G));
    REQUIRE(H.order() == G.order());
    for (Element a = 0; a < G.order(); ++a)
      for (Element b = 0; b < G.order(); ++b) CHECK(H.mul(a, b) == G.mul(a, b));
  }
  // a Latin square that is not associative
  Json bad = {{"order", 3}, {"cayley", {{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}}};
  CHECK_THROWS_AS(finite_group_from_json(bad), InvalidInput);
  Json ragged = {{"order", 2}, {"cayley", {{0, 1}, {1}}}};
  CHECK(error_of([&] { finite_group_from_json(ragged); }).find("/cayley/1") != std::string::npos);
}

TEST_CASE("fiber documents round trip") {
  for (const auto& e : torsion_catalog()) {
    CAPTURE(e.name);
    const FiberGroup& u = *e.group;
    Json j = fiber_to_json(u);
    FiberGroup v = fiber_from_json(j);
    CHECK(v.p1()->lattice() == u.p1()->lattice());
    CHECK(v.p1()->basis() == u.p1()->basis());
    CHECK(v.p2().order() == u.p2().order());
    CHECK(v.q().order() == u.q().order());
    CHECK(v.pi1_images() == u.pi1_images());
    CHECK(v.p2_generators() == u.p2_generators());
    CHECK(v.p2_images() == u.p2_images());
    CHECK(v.pi2_map() == u.pi2_map());
    CHECK(fiber_to_json(v).dump() == j.dump());
  }
  Json j = fiber_to_json(*torsion_catalog()[0].group);
  j["pi1"]["images"] = {7};
  CHECK(error_of([&] { fiber_from_json(j); }).find("in /pi1 at /images/0") != std::string::npos);
}

TEST_CASE("shipped catalog matches the built-in one") {
  const std::string dir = NILCSP_DATA;
  Json file = load_json_file(dir + "/catalog.json");
  Json expect = catalog_to_json(default_catalog());
  for (const auto& e : torsion_catalog()) expect["entries"].push_back(fiber_entry_to_json(e, "fibers/" + e.name + ".json"));
  CHECK(file == expect);

  auto entries = catalog_from_json(file);
  auto builtin = default_catalog();
  REQUIRE(entries.size() == builtin.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(entries[i].name == builtin[i].name);
    CHECK(entries[i].group.generators == builtin[i].group.generators);
  }
  auto fibers = fiber_entries_from_json(file, dir);
  auto torsion = torsion_catalog();
  REQUIRE(fibers.size() == torsion.size());
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    CHECK(fibers[i].name == torsion[i].name);
    CHECK(fibers[i].expected_t == torsion[i].expected_t);
    CHECK(fibers[i].expected_torsion == torsion[i].expected_torsion);
    CHECK(fibers[i].group->pi2_map() == torsion[i].group->pi2_map());
  }
}

TEST_CASE("catalog values are assertions") {
  Json j = catalog_to_json(default_catalog());
  for (auto& e : j["entries"])
    if (e["name"] == "heisenberg") e["expected"]["hull_index"]["value"] = "3";
  VerifyOptions opts;
  opts.catalog = catalog_from_json(j);
  auto rep = verify_suite("hull", opts);
  CHECK(rep.status() == CheckStatus::fail);
  for (const auto& c : rep.checks)
    CHECK((c.status == CheckStatus::pass) == (c.name != "hull:heisenberg"));

  j["entries"][0]["expected"]["d"]["provenance"] = "guessed";
  CHECK(error_of([&] { catalog_from_json(j); }).find("/entries/0/expected/d/provenance") != std::string::npos);
  j["entries"][0]["recipe"] = "free 0 2";
  CHECK(error_of([&] { catalog_from_json(j); }).find("/entries/0/recipe") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  const std::string data = NILCSP_DATA;
  CHECK(run_cli("hull --group " + data + "/groups/heisenberg.json") == 0);
  CHECK(run_cli("--format text basis --recipe \"free 2 3\"") == 0);
  CHECK(run_cli("hull --bogus") == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("verify no-such-suite") == 2);
  CHECK(run_cli("hull --group " + temp_file("garbage.json", "{ not json")) == 2);
  CHECK(run_cli("hull --group " + temp_file("bad-rational.json",
                                            R"({"algebra": {"dim": 1, "class": 1, "brackets": []},
                                                "generators": [["1/x"]], "filtered": true})")) == 2);
  CHECK(run_cli("verify hull --catalog " + data + "/catalog.json") == 0);
  CHECK(run_cli("verify csp --cap 1") == 3);
  CHECK(run_cli("fiber find-t --fiber " + data + "/fibers/heisenberg-x-z3.json") == 0);
  CHECK(run_cli("fiber find-t --cap 5 --fiber " + data + "/fibers/z-x-z2-s3.json") == 3);
  CHECK(run_cli("free a-iso --n 2 --c 2 --tuple '[[\"0\",\"0\",\"1\"],[\"0\",\"0\",\"0\"]]'") == 0);
  CHECK(run_cli("free a-iso --n 2 --c 2 --tuple '[[\"1\",\"0\",\"0\"],[\"0\",\"0\",\"0\"]]'") == 2);
}
