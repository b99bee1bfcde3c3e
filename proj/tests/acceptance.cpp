// Runs the acceptance criteria at their stated sizes and budgets and prints
// one PASS/FAIL line per criterion. Exit status is nonzero if any fails.
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nilcsp/verify.hpp"

using namespace nilcsp;

namespace {

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

struct Selection {
  std::vector<const CheckResult*> checks;
  double seconds = 0;
};

struct Criterion {
  int id;
  std::string title;
  double budget;
  std::function<bool(const std::string& suite, const std::string& check)> selects;
  // extra requirement on the selected checks; returns an empty string when met
  std::function<std::string(const Selection&)> require;
};

std::size_t count_prefix(const Selection& s, const std::string& p) {
  std::size_t n = 0;
  for (const auto* c : s.checks) n += starts_with(c->name, p);
  return n;
}

std::string need(std::size_t have, std::size_t want, const std::string& what) {
  if (have >= want) return "";
  return "expected " + std::to_string(want) + " " + what + ", found " + std::to_string(have);
}

}  // namespace

int main() {
  VerifyOptions opts;
  std::map<std::string, VerificationReport> reports;
  for (const auto& suite : suite_names()) {
    std::fprintf(stderr, "running %s\n", suite.c_str());
    reports[suite] = verify_suite(suite, opts);
  }

  const std::vector<Criterion> criteria = {
      {1, "BCH oracle equivalence, 200 pairs, n in {3,4,5}", 60,
       [](const std::string&, const std::string& c) { return c == "bch-matrix-oracle" || c == "bch-associativity"; },
       [](const Selection& s) {
         for (const auto* c : s.checks)
           if (c->name == "bch-matrix-oracle") return need(c->data.value("pairs", 0u), 200, "pairs");
         return std::string("bch-matrix-oracle missing");
       }},
      {2, "exp/log round trip, 500 matrices up to n = 6", 30,
       [](const std::string&, const std::string& c) { return c == "exp-log-roundtrip"; },
       [](const Selection& s) {
         if (s.checks.size() != 1) return std::string("exp-log-roundtrip missing");
         const auto& d = s.checks[0]->data;
         if (d.value("max_n", 0u) < 6) return std::string("matrices below n = 6 only");
         return need(d.value("samples", 0u), 500, "samples");
       }},
      {3, "Heisenberg lattice hull, index 2, idempotent and minimal", 5,
       [](const std::string&, const std::string& c) { return c == "heisenberg-hull" || c == "hull:heisenberg"; },
       [](const Selection& s) { return need(s.checks.size(), 2, "checks"); }},
      {4, "adapted basis on the 10-entry catalog", 60,
       [](const std::string& suite, const std::string& c) {
         return suite == "basis" || (suite == "hull" && starts_with(c, "hull:"));
       },
       [](const Selection& s) { return need(count_prefix(s, "basis:"), 10, "catalog entries"); }},
      {5, "IA* of the Heisenberg hull with bound 3 is the 49-element family", 30,
       [](const std::string& suite, const std::string&) { return suite == "ia-structure"; },
       [](const Selection& s) {
         for (const auto* c : s.checks)
           if (c->name == "heisenberg-ia-star") {
             std::size_t n = c->data.value("elements", 0u);
             return n == 49 ? std::string() : "found " + std::to_string(n) + " elements";
           }
         return std::string("heisenberg-ia-star missing");
       }},
      {6, "strong approximation for m = 2..8 on the Heisenberg and free (2,3) hulls", 120,
       [](const std::string& suite, const std::string&) { return suite == "strong-approx"; },
       [](const Selection& s) {
         std::string e = need(count_prefix(s, "strong-approx:heisenberg:"), 7, "Heisenberg levels");
         if (e.empty()) e = need(count_prefix(s, "strong-approx:free-hull 2 3:"), 7, "free (2,3) levels");
         return e;
       }},
      {7, "CSP witnesses for at least 12 subgroups of index <= 16, level <= 16", 120,
       [](const std::string& suite, const std::string&) { return suite == "csp"; },
       [](const Selection& s) {
         std::size_t n = 0;
         for (const auto* c : s.checks) {
           if (!starts_with(c->name, "csp:")) continue;
           ++n;
           if (c->data.value("index", 0u) > 16) return c->name + " has index above 16";
           if (c->data.value("m", 0u) > 16) return c->name + " needs level above 16";
         }
         return need(n, 12, "subgroups");
       }},
      {8, "fiber reconstruction at all levels m <= 12 with t | m", 60,
       [](const std::string&, const std::string& c) {
         return starts_with(c, "rho:") || c == "find-t:z-x-z2-z4" || c == "find-t:heisenberg-x-z3";
       },
       [](const Selection& s) {
         std::string e = need(count_prefix(s, "rho:z-x-z2-z4:"), 6, "levels for Z x_{Z/2} Z/4");
         if (e.empty()) e = need(count_prefix(s, "rho:heisenberg-x-z3:"), 4, "levels for the Heisenberg hull x Z/3");
         return e;
       }},
      {9, "lifting compatible pairs, rejecting incompatible ones", 60,
       [](const std::string&, const std::string& c) { return starts_with(c, "lift:"); },
       [](const Selection& s) { return need(s.checks.size(), 7, "torsion catalog entries"); }},
      {10, "A(Psi) isomorphism on the [-2,2] boxes, composition law, section properties", 180,
       [](const std::string& suite, const std::string& c) { return suite == "free-iso" || starts_with(c, "k-tilde:"); },
       [](const Selection& s) {
         std::string e = need(count_prefix(s, "a-iso:"), 3, "(n,c) boxes");
         if (e.empty()) e = need(count_prefix(s, "composition:"), 3, "composition checks");
         if (e.empty()) e = need(count_prefix(s, "section:"), 3, "section checks");
         return e;
       }},
      {11, "Gamma* and Delta* agree on the torsion catalog", 10,
       [](const std::string&, const std::string& c) { return starts_with(c, "gamma-star:"); },
       [](const Selection& s) { return need(s.checks.size(), 7, "torsion catalog entries"); }},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    Selection sel;
    for (const auto& [suite, rep] : reports)
      for (const auto& c : rep.checks)
        if (cr.selects(suite, c.name)) {
          sel.checks.push_back(&c);
          sel.seconds += c.seconds;
        }
    std::string why;
    if (sel.checks.empty()) why = "no checks selected";
    for (const auto* c : sel.checks)
      if (why.empty() && c->status != CheckStatus::pass)
        why = c->name + " " + (c->status == CheckStatus::fail ? "failed" : "inconclusive") +
              (c->detail.empty() ? "" : ": " + c->detail);
    if (why.empty()) why = cr.require(sel);
    if (why.empty() && sel.seconds > cr.budget) why = "over budget";
    const bool pass = why.empty();
    failures += !pass;
    std::printf("%s criterion %d: %s [%zu checks, %.2f s of %.0f s]%s%s\n", pass ? "PASS" : "FAIL", cr.id,
                cr.title.c_str(), sel.checks.size(), sel.seconds, cr.budget, pass ? "" : " -- ", why.c_str());
  }
  return failures == 0 ? 0 : 1;
}
