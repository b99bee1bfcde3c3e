#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "nilcsp/automorphism.hpp"
#include "nilcsp/catalog.hpp"
#include "nilcsp/io.hpp"

namespace nilcsp {

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
  Json data = Json::object();
  double seconds = 0;
};

struct VerificationReport {
  std::string suite;
  std::uint64_t seed = 0;
  Json caps = Json::object();
  std::vector<CheckResult> checks;
  double seconds = 0;

  // fail if any check failed, else inconclusive if any was, else pass
  CheckStatus status() const;
  Json to_json() const;
  std::string to_text() const;
};

// A finite-index subgroup of IA* with its index and a membership test.
struct IaSubgroup {
  std::string name;
  LatticeGroupPtr delta;
  std::vector<ZMatrix> generators;
  std::size_t index = 1;
  std::function<bool(const ZMatrix&)> contains;  // may be empty
};
// The built-in csp test subgroups on catalog hulls.
std::vector<IaSubgroup> csp_test_subgroups();

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::vector<CatalogEntry> catalog;  // empty: default_catalog()
  std::vector<TorsionEntry> fibers;   // empty: torsion_catalog()
  std::size_t bch_pairs = 200;
  std::size_t roundtrips = 500;
  std::int64_t ia_bound = 3;
  std::int64_t max_level = 8;             // strong approximation at m = 2..max_level
  std::optional<std::int64_t> only_level;
  std::int64_t csp_level_cap = 16;
  std::vector<IaSubgroup> subgroups;      // empty: csp_test_subgroups()
  std::size_t membership_samples = 100;
  std::int64_t fiber_level_cap = 12;
  std::size_t aut_cap = 48;               // largest |Aut(P2)| searched exhaustively
  std::size_t point_cap = 5'000'000;
  long iso_box = 2;
  std::size_t iso_pairs = 50;
  bool naive_counts = false;
};

const std::vector<std::string>& suite_names();
// Throws InvalidInput for an unknown suite name.
VerificationReport verify_suite(const std::string& suite, const VerifyOptions& opts);

}  // namespace nilcsp
