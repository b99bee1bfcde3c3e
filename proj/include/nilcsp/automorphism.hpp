#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "nilcsp/ia_system.hpp"

namespace nilcsp {

// Matrices act on row vectors: row i of A is the image of basis vector i.

struct LieAutCheck {
  bool ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // first violating pair
};
// [A b_i, A b_j] == A [b_i, b_j] on all basis pairs. Throws InvalidInput when
// A is singular or has the wrong size.
LieAutCheck is_lie_aut(const LieAlgebra& L, const QMatrix& A);

// A Lambda = Lambda for an invertible A (lattice in the same coordinates).
bool stabilizes_lattice(const QMatrix& A, const Lattice& lattice);

// Conversions between the algebra's coordinates and the adapted basis of delta.
QMatrix to_basis_matrix(const LatticeGroup& delta, const QMatrix& ambient);
QMatrix from_basis_matrix(const LatticeGroup& delta, const QMatrix& in_basis);

// The Lie endomorphism with the given images of the first-layer basis
// elements (d x k rows), extended through the brackets; nullopt unless it
// is an integral automorphism of the lattice.
std::optional<ZMatrix> extend_first_layer(const LatticeGroup& delta, const QMatrix& first_rows);

// A is given in adapted-basis coordinates. True iff A is a Lie automorphism,
// unitriangular, the identity on the first layer modulo L' and A Lambda = Lambda.
bool is_ia_star(const LatticeGroup& delta, const QMatrix& A, std::string* reason = nullptr);

// Induced action on (Lambda + L') / L' in first-layer coordinates.
ZMatrix aut_star_image(const LatticeGroup& delta, const QMatrix& A);

// Dimension of the unipotent group Aut(L) cap Tr_1: derivations D of L with
// D(L) inside L'.
std::size_t ia_rank(const LieAlgebra& L);

struct EnumerateOptions {
  std::size_t max_dim = 6;
  std::size_t cap = 1'000'000;
};
// All integer IA* matrices (adapted basis) with off-diagonal entries in [-N, N],
// in deterministic order. Throws CapExceeded past the caps.
std::vector<ZMatrix> enumerate_ia_star(const IaSystem& sys, std::int64_t bound,
                                       const EnumerateOptions& opts = {});

// ---- strong approximation at finite levels ----

enum class CheckStatus { pass, fail, inconclusive };
const char* to_string(CheckStatus s);

struct StrongApproxOptions {
  std::size_t point_cap = 5'000'000;
  IaSystem::LiftOptions lift;
  bool count_naive = false;     // also count solutions of the Lie equations alone
  bool keep_lifts = false;
};
struct StrongApproxReport {
  std::int64_t m = 1;
  std::int64_t scale = 1;         // s = m * D, the level actually used
  std::size_t points = 0;         // solutions mod s
  std::optional<std::size_t> naive_points;
  std::size_t lifted = 0;
  CheckStatus status = CheckStatus::pass;
  std::vector<std::int64_t> witness;  // unlifted residues
  std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> lifts;
  std::string note;
};
// Enumerates the mod-s points of the unipotent group and lifts each one to an
// integral IA* element whose reduction is that point.
StrongApproxReport strong_approx_check(const IaSystem& sys, std::int64_t m,
                                       const StrongApproxOptions& opts = {});

// Congruence scale s for level m as an int64 (throws CapExceeded if too big).
std::int64_t congruence_scale(const LatticeGroup& delta, std::int64_t m);

// Random integral IA* element congruent to the given residues mod s, following
// a single random path; nullopt on a dead end.
std::optional<std::vector<std::int64_t>> random_lift(const IaSystem& sys,
                                                      const std::vector<std::int64_t>& residues,
                                                      std::int64_t s, std::mt19937_64& rng,
                                                      std::int64_t shift_range = 3);

// ---- congruence subgroup witnesses ----

struct CspOptions {
  std::size_t point_cap = 2'000'000;
  std::size_t orbit_cap = 2'000'000;
  IaSystem::LiftOptions lift;
};
struct CspResult {
  CheckStatus status = CheckStatus::inconclusive;
  std::int64_t m = 0;
  std::int64_t scale = 0;
  std::size_t group_order = 0;  // |U(Z/s)|
  std::size_t image_order = 0;  // |image of H|
  std::string note;
};
// Smallest m <= level_cap with [U(Z/s) : image of H] == h, where strong
// approximation at s is verified so that U(Z/s) is the reduction of IA*.
CspResult csp_witness(const IaSystem& sys, const std::vector<ZMatrix>& generators,
                      std::size_t h, std::int64_t level_cap, const CspOptions& opts = {});

}  // namespace nilcsp
