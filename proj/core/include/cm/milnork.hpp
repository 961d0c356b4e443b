#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cm/algebra.hpp"
#include "cm/fpgroup.hpp"
#include "cm/kahler.hpp"

namespace cm::milnor {

using alg::FinAlgebra;
using alg::SplitNilpotentPair;
using alg::UnitTable;
using exact::AbGroup;
using exact::Hom;
using exact::SVec;

struct non_unit_entry_error : error {
  using error::error;
};
struct no_relative_entry_error : error {
  using error::error;
};
struct malformed_generator_error : error {
  using error::error;
};

using Elt = std::vector<Fp>;

// Milnor K-group K_n^M(R) of a finite ring by the naive symbol presentation:
// generators are n-tuples of units, relations are multiplicativity in every
// slot and the Steinberg relation on adjacent slots.  extra_relations also
// imposes the additive-inverse and anticommutativity families.  The
// unit-basis route presents the same group on tuples of generators of R*
// (with multiplicativity absorbed into the basis) and is kept for
// cross-checking the full presentation.
class SymbolPresentation {
 public:
  enum class Route { full, unit_basis };

  SymbolPresentation(const FinAlgebra<Fp>& r, std::int32_t n,
                     bool extra_relations = false, Route route = Route::full);

  const FinAlgebra<Fp>& algebra() const { return *r_; }
  std::int32_t length() const { return n_; }
  Route route() const { return route_; }
  const UnitTable& units() const { return units_; }
  const AbGroup& group() const { return group_; }

  std::int64_t n_generators() const { return n_gens_; }
  std::int64_t multiplicative_rows() const { return n_mult_rows_; }
  std::int64_t steinberg_rows() const { return n_steinberg_rows_; }
  std::int64_t extra_rows() const { return n_extra_rows_; }

  // canonical class of the Steinberg symbol with the given unit ids
  std::vector<Int> symbol_class(const std::vector<std::int32_t>& ids) const;
  // canonical class of a symbol given by ring elements (must be units)
  std::vector<Int> symbol_class_of(const std::vector<Elt>& entries) const;

 private:
  void build_full(bool extra);
  void build_unit_basis(bool extra);
  std::int64_t tuple_index(const std::vector<std::int32_t>& ids) const;

  const FinAlgebra<Fp>* r_;
  std::int32_t n_;
  Route route_;
  UnitTable units_;
  AbGroup group_;
  std::int64_t n_gens_ = 0, n_mult_rows_ = 0, n_steinberg_rows_ = 0,
               n_extra_rows_ = 0;
  // unit-basis route data: canonical coordinates of each unit in the
  // collapsed presentation of R*
  std::vector<std::vector<Int>> unit_dlog_;
  std::vector<Int> unit_basis_mods_;
};

SymbolPresentation milnor_k(const FinAlgebra<Fp>& r, std::int32_t n,
                            bool extra_relations = false);

struct RelativeMilnorK {
  std::shared_ptr<SymbolPresentation> absolute;  // K_n^M(R)
  std::shared_ptr<SymbolPresentation> quotient;  // K_n^M(S)
  AbGroup group;                                 // the kernel, abstractly
  std::vector<std::vector<Int>> inclusion;       // into K(R) canonical coords
  bool split_decomposition_ok;  // factors(R) = factors(S) u factors(rel)
};

RelativeMilnorK milnor_k_relative(const SplitNilpotentPair<Fp>& pair,
                                  std::int32_t n,
                                  bool extra_relations = false);

// Dennis-Stein-Beilinson-Loday D_2: generators <a,b> over pairs with 1+ab a
// unit, subject to <a,b><-b,-a> = 1, <a,b><a,c> = <a,b+c+abc>, and
// <a,bc> = <ab,c><ac,b>.  The optional relative filter keeps only symbols
// with an entry in the ideal, with relation instances restricted to the
// surviving generators.
class DennisSteinPresentation {
 public:
  DennisSteinPresentation(const FinAlgebra<Fp>& r,
                          const SplitNilpotentPair<Fp>* relative_to = nullptr);

  const AbGroup& group() const { return group_; }
  std::int64_t n_generators() const { return n_gens_; }
  std::int64_t rows_family1() const { return rows1_; }
  std::int64_t rows_family2() const { return rows2_; }
  std::int64_t rows_family3() const { return rows3_; }

  // canonical class of <a, b>
  std::vector<Int> symbol_class(const Elt& a, const Elt& b) const;

 private:
  const FinAlgebra<Fp>* r_;
  std::vector<Elt> elems_;
  std::vector<std::int64_t> gen_of_pair_;  // element-pair index -> generator
  std::int64_t n_elems_ = 0;
  AbGroup group_;
  std::int64_t n_gens_ = 0, rows1_ = 0, rows2_ = 0, rows3_ = 0;
};

DennisSteinPresentation dennis_stein_d2(
    const FinAlgebra<Fp>& r,
    const SplitNilpotentPair<Fp>* relative_to = nullptr);

// dlog({r_1,...,r_n}) = dr_1/r_1 ^ ... ^ dr_n/r_n as a formal vector of
// Omega^n; entries must be units
std::vector<Fp> dlog_formal(const FinAlgebra<Fp>& r,
                            const kahler::OmegaModule<Fp>& omega_n,
                            const std::vector<Elt>& entries);

// phi({r_0,...,r_n}) = sign * log(r_j) dr_1/r_1 ^ ... (entry j in (1+I)*
// moved to the front through anticommutativity), as a class in
// Omega^n_{R,I}/dOmega^{n-1}_{R,I}
std::vector<Fp> phi_class(const SplitNilpotentPair<Fp>& pair,
                          const kahler::OmegaModExact<Fp>& target,
                          const std::vector<Elt>& symbol);

// psi(r_0 dr_1 ^ ... ^ dr_n) = {e^{r_0 r_{m+1}...r_n}, e^{r_1},...,e^{r_m},
// r_{m+1},...,r_n} where r_0..r_m lie in the ideal and the rest are units
struct OmegaGenerator {
  Elt coefficient;         // r_0, in I
  std::vector<Elt> wedge;  // r_1..r_n, ideal prefix then unit suffix
};
std::vector<Elt> psi_symbol(const SplitNilpotentPair<Fp>& pair,
                            const OmegaGenerator& gen);

// Comparison of K^M_{n+1}(R,I) with Omega^n_{R,I}/dOmega^{n-1}_{R,I}.
struct GoodwillieReport {
  std::int32_t n = 0;                   // theorem degree
  bool stable_5fold = false;            // S is 5-fold stable
  bool integers_invertible = false;     // 1..N invertible in S
  bool hypotheses_hold = false;
  std::int64_t k_free_rank = 0;
  std::vector<Int> k_torsion;
  std::int64_t omega_free_rank = 0;
  std::vector<Int> omega_torsion;
  bool groups_isomorphic = false;
  // map diagnostics; absent when the series preconditions fail
  std::optional<bool> phi_well_defined;
  std::optional<bool> psi_images_generate;
  std::optional<bool> phi_psi_identity;
  std::optional<bool> psi_phi_identity;
  std::string map_failure_reason;
  bool split_decomposition_ok = false;
};

GoodwillieReport goodwillie_milnor_check(const SplitNilpotentPair<Fp>& pair,
                                         std::int32_t n);

}  // namespace cm::milnor
