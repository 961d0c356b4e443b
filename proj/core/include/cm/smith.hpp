#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cm/zmat.hpp"

namespace cm::exact {

// Full Smith decomposition U * m * V = S with U, V unimodular and S diagonal
// with d1 | d2 | ... .  Vinv is maintained alongside V.  Dense algorithm with
// Bezout one-shot eliminations; intended for moderate sizes.
struct SmithFull {
  DenseZ S, U, V, Vinv;
  std::int32_t rank = 0;
  std::vector<Int> diag() const {
    std::vector<Int> d;
    for (std::int32_t i = 0; i < rank; ++i) d.push_back(S(i, i));
    return d;
  }
};

SmithFull smith_normal_form(const ZMat& m);
SmithFull smith_normal_form(DenseZ m);

// Basis of { x : x * A = 0 } as rows.  The result spans the full (saturated)
// kernel lattice.
std::vector<std::vector<Int>> left_kernel(const ZMat& A);

// Solves x * A = b over Z if possible.
std::optional<std::vector<Int>> solve_left(const SmithFull& snf_of_A,
                                           const std::vector<Int>& b);

// Cokernel collapse of a sparse relation lattice: computes the canonical
// form of Z^n / rowspace(relations) while logging the column operations, so
// arbitrary vectors can later be mapped to canonical coordinates.  Row
// operations are not tracked.  Pivoting prefers +-1 entries with minimal
// Markowitz fill; the residual matrix is finished by the dense Smith routine.
class Collapse {
 public:
  Collapse(std::int32_t n_cols, std::vector<SVec> relation_rows);

  std::int32_t n_gens() const { return n_cols_; }

  // canonical coordinates: one per kept generator
  std::int32_t canonical_size() const { return (std::int32_t)mods_.size(); }
  const std::vector<Int>& coord_mods() const { return mods_; }  // 0 = free

  std::int64_t free_rank() const;
  const std::vector<Int>& invariant_factors() const { return factors_; }

  // original coordinates -> canonical coordinates
  std::vector<Int> reduce(const std::vector<Int>& x) const;
  std::vector<Int> reduce(const SVec& x) const;
  bool is_zero_class(const SVec& x) const;

  // canonical generator expressed in the original generators
  std::vector<Int> generator_expression(std::int32_t k) const;

 private:
  struct ColOp {
    std::int32_t src, dst;
    Int c;
  };  // C_dst += c * C_src; coordinates transform x[dst] += c * x[src]

  void run(std::vector<SVec> rows);

  std::int32_t n_cols_ = 0;
  std::vector<ColOp> log_;

  // canonical layout: retired torsion columns (ascending id), then the
  // finish-block coordinates
  std::vector<std::pair<std::int32_t, Int>> retired_;  // (col, modulus >= 2)
  std::vector<std::int32_t> finish_cols_;  // active original columns, ascending
  SmithFull finish_;                       // SNF of the dense residual
  std::vector<std::int32_t> finish_kept_;  // finish coords with modulus != 1
  std::vector<Int> mods_;                  // all canonical coords; 0 = free
  std::vector<Int> factors_;               // divisibility-chained, all >= 2
};

// Invariant factors of a diagonal multiset, chained so d1 | d2 | ... ;
// zero entries are dropped (they contribute free rank).
std::vector<Int> chain_invariant_factors(std::vector<Int> diag);

}  // namespace cm::exact
