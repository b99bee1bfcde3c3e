#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "nilcsp/hull.hpp"
#include "nilcsp/normal_forms.hpp"

namespace nilcsp {

// Unknowns and equations of block-unitriangular automorphisms A of the
// lattice Lie ring, written in the adapted basis (row convention: row i is
// the image of b_i). The first-layer block is the identity; every entry
// A[r][q] with r < q outside that block is an unknown.
//
// Column q of the equations A[b_i, b_j] = [A b_i, A b_j] only involves
// unknowns of column q linearly (with the fixed integer matrix C_q) and
// entries of columns in strictly lower layers nonlinearly:
//   sum_l c_ij^l A[l][q] = sum_{a,b} A[i][a] A[j][b] c_ab^q - c_ij^q.
// So columns can be solved in order, each by the Smith form of C_q.
class IaSystem {
 public:
  explicit IaSystem(LatticeGroupPtr delta);

  struct Unknown {
    std::size_t row, col;
  };
  struct Column {
    std::size_t q;
    std::vector<std::size_t> rows;  // unknown rows of this column
    std::vector<std::size_t> ids;   // matching unknown ids
    ZMatrix C;                      // pairs x unknown rows
    SmithForm smith;
    ZMatrix Vinv;
  };

  const LatticeGroup& delta() const { return *delta_; }
  const LatticeGroupPtr& delta_ptr() const { return delta_; }
  std::size_t dim() const { return k_; }
  const std::vector<Unknown>& unknowns() const { return unknowns_; }
  const std::vector<Column>& columns() const { return columns_; }

  // Identity plus the unknown values, as a dense int64 k x k array.
  std::vector<std::int64_t> dense(const std::vector<std::int64_t>& values) const;
  ZMatrix matrix(const std::vector<std::int64_t>& values) const;
  // Unknown values of a block-unitriangular matrix (throws if not of that shape).
  std::vector<std::int64_t> values_of(const ZMatrix& A) const;

  // Right-hand side of column c (index into columns()) given the dense
  // matrix; reduced mod s when s > 0.
  std::vector<std::int64_t> rhs(std::size_t c, const std::vector<std::int64_t>& A,
                                std::int64_t s) const;

  // ---- enumeration modulo s ----
  struct ModOptions {
    bool group_law = true;            // also impose the group-law conditions
    std::size_t cap = 50'000'000;     // points
  };
  // Visits every solution mod s (values in [0, s)). Returns the count.
  std::size_t enumerate_mod(std::int64_t s, const ModOptions& opts,
                            const std::function<void(const std::vector<std::int64_t>&)>& visit) const;

  // ---- integral lifts ----
  struct LiftOptions {
    std::int64_t shift_range = 2;  // free coordinates move by s*t, |t| <= range
    std::size_t node_budget = 20000;
  };
  enum class LiftStatus { lifted, not_found, budget };
  struct LiftResult {
    LiftStatus status;
    std::vector<std::int64_t> values;  // integral unknown values when lifted
  };
  LiftResult lift(const std::vector<std::int64_t>& residues, std::int64_t s,
                  const LiftOptions& opts) const;

  // Exact Lie-automorphism test of an integer dense matrix.
  bool satisfies_lie_equations(const std::vector<std::int64_t>& A) const;

  // Number of group-law conditions (binomial coefficients of the defect).
  std::size_t condition_count() const;

 private:
  struct Term {
    std::int64_t coeff;
    std::vector<std::pair<std::uint16_t, std::uint8_t>> factors;  // (unknown id, exponent)
  };
  struct Condition {
    std::int64_t den;
    std::vector<Term> terms;
  };
  bool conditions_hold(std::size_t column_index, const std::vector<std::int64_t>& values,
                       std::int64_t s) const;
  void build_conditions();

  LatticeGroupPtr delta_;
  std::size_t k_;
  std::vector<Unknown> unknowns_;
  std::vector<int> unknown_id_;  // r * k + q -> id or -1
  std::vector<Column> columns_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::vector<std::int64_t>> pair_const_;  // [pair][l] = c_ij^l
  struct Into {
    std::size_t a, b;
    std::int64_t c;
  };
  std::vector<std::vector<Into>> into_;  // [q] -> nonzero c_ab^q
  std::vector<std::vector<Condition>> conditions_;  // by column index
};

}  // namespace nilcsp
