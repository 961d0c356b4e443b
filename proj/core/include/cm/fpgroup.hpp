#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cm/smith.hpp"

namespace cm::exact {

struct ill_defined_map_error : error {
  using error::error;
};
struct not_a_complex_error : error {
  using error::error;
};

// Finitely presented abelian group in invariant-factor canonical form.
// An element is a coordinate vector over the presentation generators;
// reduce() maps it to canonical coordinates (one per canonical generator,
// torsion coordinates normalized into [0, d)).
class AbGroup {
 public:
  AbGroup() : AbGroup(0, {}) {}
  AbGroup(std::int32_t n_gens, std::vector<SVec> relations,
          std::vector<std::string> labels = {});

  static AbGroup free_group(std::int32_t rank) { return AbGroup(rank, {}); }
  // field-backed "group": records a vector-space dimension
  static AbGroup vector_space(std::int64_t dim);

  std::int32_t n_gens() const { return c_->n_gens(); }
  std::int32_t canonical_rank() const { return c_->canonical_size(); }
  const std::vector<Int>& coord_mods() const { return c_->coord_mods(); }
  std::int64_t free_rank() const { return c_->free_rank(); }
  const std::vector<Int>& torsion() const { return c_->invariant_factors(); }

  bool is_trivial() const { return free_rank() == 0 && torsion().empty(); }
  bool iso_equal(const AbGroup& o) const {
    return free_rank() == o.free_rank() && torsion() == o.torsion();
  }

  std::vector<Int> reduce(const SVec& x) const { return c_->reduce(x); }
  std::vector<Int> reduce(const std::vector<Int>& x) const {
    return c_->reduce(x);
  }
  bool element_equal(const std::vector<Int>& a,
                     const std::vector<Int>& b) const;
  bool class_is_zero(const std::vector<Int>& canonical) const;

  // canonical coordinate arithmetic
  std::vector<Int> canon_add(const std::vector<Int>& a,
                             const std::vector<Int>& b) const;
  std::vector<Int> canon_scale(const Int& c, const std::vector<Int>& a) const;
  std::vector<Int> canon_normalize(std::vector<Int> a) const;

  // canonical generator k as a vector over the presentation generators
  std::vector<Int> generator_expression(std::int32_t k) const {
    return c_->generator_expression(k);
  }
  // relation rows of the canonical presentation (d_i * e_i per torsion coord)
  std::vector<SVec> canonical_relation_rows() const;

  const std::vector<std::string>& labels() const { return labels_; }
  std::string to_string() const;

 private:
  std::shared_ptr<const Collapse> c_;
  std::vector<std::string> labels_;
};

// Homomorphism given by images of the source presentation generators,
// expressed over the target presentation generators.
class Hom {
 public:
  Hom(AbGroup src, AbGroup tgt, std::vector<SVec> gen_images);

  const AbGroup& src() const { return src_; }
  const AbGroup& tgt() const { return tgt_; }

  // image of every source relation lies in the target relation lattice
  bool well_defined() const;
  void require_well_defined() const;

  // canonical matrix: row i = image of the i-th canonical source generator,
  // in canonical target coordinates
  const std::vector<std::vector<Int>>& canonical_matrix() const {
    return canon_;
  }

  std::vector<Int> apply_canonical(const std::vector<Int>& x) const;
  std::vector<Int> apply(const SVec& x) const;  // presentation coords in

  bool is_zero() const;

  struct Kernel {
    AbGroup group;
    // canonical source coordinates of each kernel generator
    std::vector<std::vector<Int>> inclusion;
  };
  Kernel kernel() const;

  // image as a list of subgroup generators in canonical target coordinates
  std::vector<std::vector<Int>> image_generators() const { return canon_; }

  static Hom compose(const Hom& f, const Hom& g);  // x -> g(f(x))
  static Hom identity(const AbGroup& g);
  static Hom zero(const AbGroup& src, const AbGroup& tgt);
  // build directly from a canonical-coordinates matrix
  static Hom from_canonical(AbGroup src, AbGroup tgt,
                            std::vector<std::vector<Int>> canon);

 private:
  Hom() = default;
  AbGroup src_, tgt_;
  std::vector<std::vector<Int>> canon_;
};

// Subgroup of G generated by elements in canonical coordinates.
class Subgroup {
 public:
  Subgroup(AbGroup g, std::vector<std::vector<Int>> gens);

  const AbGroup& ambient() const { return g_; }
  const std::vector<std::vector<Int>>& gens() const { return gens_; }

  AbGroup as_abstract_group() const;
  bool contains(const std::vector<Int>& canonical) const;
  // x = sum c_i gens_i (mod relations of G); nullopt if not in the subgroup
  std::optional<std::vector<Int>> coordinates_of(
      const std::vector<Int>& canonical) const;

 private:
  AbGroup g_;
  std::vector<std::vector<Int>> gens_;
  SmithFull solver_;  // SNF of [gens; relations of G]
  std::int32_t n_sub_;
};

// G / <subgroup generators>, presented on the canonical generators of G.
AbGroup quotient_group(const AbGroup& g,
                       const std::vector<std::vector<Int>>& subgens);

// ker(g) / im(f) for a two-step complex A --f--> B --g--> C.
// Throws not_a_complex_error unless g(f(.)) = 0.
struct HomologyResult {
  AbGroup group;
  // canonical B coordinates of each homology generator (a kernel basis)
  std::vector<std::vector<Int>> cycle_reps;
  // coordinates of a cycle (canonical B coords) as a homology class
  // are obtained via the stored subgroup solver
  std::shared_ptr<Subgroup> cycles;
};
HomologyResult homology(const Hom& f, const Hom& g);

// Window of a chain complex of f.p. abelian groups with explicit boundaries.
// boundaries[k] maps degree k to degree k-1.
struct ZComplexSlice {
  std::map<int, AbGroup> term;
  std::map<int, Hom> boundary;

  const AbGroup& term_at(int n) const;
  Hom boundary_at(int n) const;  // zero map if absent
};

AbGroup complex_homology(const ZComplexSlice& slice, int degree);

// cokernel of relations^T: the group on n_gens generators subject to the
// given relation rows
inline AbGroup fp_group(std::int32_t n_gens, std::vector<SVec> relations,
                        std::vector<std::string> labels = {}) {
  return AbGroup(n_gens, std::move(relations), std::move(labels));
}

}  // namespace cm::exact
