#include "cm/fpgroup.hpp"

#include <cassert>

namespace cm::exact {

AbGroup::AbGroup(std::int32_t n_gens, std::vector<SVec> relations,
                 std::vector<std::string> labels)
    : c_(std::make_shared<Collapse>(n_gens, std::move(relations))),
      labels_(std::move(labels)) {}

AbGroup AbGroup::vector_space(std::int64_t dim) {
  return free_group((std::int32_t)dim);
}

bool AbGroup::element_equal(const std::vector<Int>& a,
                            const std::vector<Int>& b) const {
  std::vector<Int> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return class_is_zero(reduce(d));
}

bool AbGroup::class_is_zero(const std::vector<Int>& canonical) const {
  for (const Int& v : canonical)
    if (sgn(v) != 0) return false;
  return true;
}

std::vector<Int> AbGroup::canon_normalize(std::vector<Int> a) const {
  const auto& mods = coord_mods();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(mods[i]) != 0)
      mpz_fdiv_r(a[i].get_mpz_t(), a[i].get_mpz_t(), mods[i].get_mpz_t());
  return a;
}

std::vector<Int> AbGroup::canon_add(const std::vector<Int>& a,
                                    const std::vector<Int>& b) const {
  std::vector<Int> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return canon_normalize(std::move(c));
}

std::vector<Int> AbGroup::canon_scale(const Int& c,
                                      const std::vector<Int>& a) const {
  std::vector<Int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return canon_normalize(std::move(r));
}

std::vector<SVec> AbGroup::canonical_relation_rows() const {
  std::vector<SVec> rows;
  const auto& mods = coord_mods();
  for (std::int32_t i = 0; i < (std::int32_t)mods.size(); ++i)
    if (sgn(mods[i]) != 0) rows.push_back({{i, mods[i]}});
  return rows;
}

std::string AbGroup::to_string() const {
  if (is_trivial()) return "0";
  std::string s;
  auto fr = free_rank();
  if (fr == 1) s = "Z";
  if (fr > 1) s = "Z^" + std::to_string(fr);
  for (const Int& d : torsion()) {
    if (!s.empty()) s += " x ";
    s += "Z/" + d.get_str();
  }
  return s;
}

// ---------------------------------------------------------------------------

Hom::Hom(AbGroup src, AbGroup tgt, std::vector<SVec> gen_images)
    : src_(std::move(src)), tgt_(std::move(tgt)) {
  assert((std::int32_t)gen_images.size() == src_.n_gens());
  canon_.resize(src_.canonical_rank());
  for (std::int32_t k = 0; k < src_.canonical_rank(); ++k) {
    std::vector<Int> expr = src_.generator_expression(k);
    std::vector<Int> img(tgt_.n_gens());
    for (std::int32_t j = 0; j < src_.n_gens(); ++j) {
      if (sgn(expr[j]) == 0) continue;
      for (auto& [t, v] : gen_images[j]) img[t] += expr[j] * v;
    }
    canon_[k] = tgt_.reduce(img);
  }
}

Hom Hom::from_canonical(AbGroup src, AbGroup tgt,
                        std::vector<std::vector<Int>> canon) {
  Hom h;
  h.src_ = std::move(src);
  h.tgt_ = std::move(tgt);
  h.canon_ = std::move(canon);
  assert((std::int32_t)h.canon_.size() == h.src_.canonical_rank());
  for (auto& row : h.canon_) row = h.tgt_.canon_normalize(std::move(row));
  return h;
}

Hom Hom::identity(const AbGroup& g) {
  std::vector<std::vector<Int>> m(g.canonical_rank(),
                                  std::vector<Int>(g.canonical_rank()));
  for (std::int32_t i = 0; i < g.canonical_rank(); ++i) m[i][i] = 1;
  return from_canonical(g, g, std::move(m));
}

Hom Hom::zero(const AbGroup& src, const AbGroup& tgt) {
  std::vector<std::vector<Int>> m(src.canonical_rank(),
                                  std::vector<Int>(tgt.canonical_rank()));
  return from_canonical(src, tgt, std::move(m));
}

bool Hom::well_defined() const {
  const auto& mods = src_.coord_mods();
  for (std::int32_t k = 0; k < src_.canonical_rank(); ++k) {
    if (sgn(mods[k]) == 0) continue;
    std::vector<Int> scaled = tgt_.canon_scale(mods[k], canon_[k]);
    if (!tgt_.class_is_zero(scaled)) return false;
  }
  return true;
}

void Hom::require_well_defined() const {
  if (!well_defined())
    throw ill_defined_map_error(
        "IllDefinedMap: a source relation does not map into the target "
        "relation lattice");
}

std::vector<Int> Hom::apply_canonical(const std::vector<Int>& x) const {
  std::vector<Int> y(tgt_.canonical_rank());
  for (std::int32_t k = 0; k < (std::int32_t)canon_.size(); ++k) {
    if (sgn(x[k]) == 0) continue;
    for (std::int32_t j = 0; j < (std::int32_t)y.size(); ++j)
      y[j] += x[k] * canon_[k][j];
  }
  return tgt_.canon_normalize(std::move(y));
}

std::vector<Int> Hom::apply(const SVec& x) const {
  return apply_canonical(src_.reduce(x));
}

bool Hom::is_zero() const {
  for (auto& row : canon_)
    if (!tgt_.class_is_zero(row)) return false;
  return true;
}

Hom Hom::compose(const Hom& f, const Hom& g) {
  std::vector<std::vector<Int>> m(f.src_.canonical_rank());
  for (std::int32_t k = 0; k < (std::int32_t)m.size(); ++k)
    m[k] = g.apply_canonical(f.canon_[k]);
  return from_canonical(f.src_, g.tgt_, std::move(m));
}

Hom::Kernel Hom::kernel() const {
  const std::int32_t s = src_.canonical_rank();
  const std::int32_t t = tgt_.canonical_rank();

  // stack the canonical matrix over the target relations; x-parts of the
  // left kernel span the preimage lattice of the target relation lattice
  std::vector<SVec> tgt_rel = tgt_.canonical_relation_rows();
  ZMat stacked(s + (std::int32_t)tgt_rel.size(), t);
  for (std::int32_t i = 0; i < s; ++i)
    for (std::int32_t j = 0; j < t; ++j)
      if (sgn(canon_[i][j]) != 0) stacked.set(i, j, canon_[i][j]);
  for (std::int32_t r = 0; r < (std::int32_t)tgt_rel.size(); ++r)
    for (auto& [j, v] : tgt_rel[r]) stacked.set(s + r, j, v);
  stacked.finish();

  std::vector<std::vector<Int>> ker = left_kernel(stacked);
  std::vector<std::vector<Int>> pre;  // generators of the preimage lattice
  for (auto& row : ker) {
    std::vector<Int> x(row.begin(), row.begin() + s);
    bool nz = false;
    for (auto& v : x) nz |= (sgn(v) != 0);
    if (nz) pre.push_back(std::move(x));
  }

  // relations among the preimage generators modulo the source relations
  std::vector<SVec> src_rel = src_.canonical_relation_rows();
  const std::int32_t u = (std::int32_t)pre.size();
  ZMat stacked2(u + (std::int32_t)src_rel.size(), s);
  for (std::int32_t i = 0; i < u; ++i)
    for (std::int32_t j = 0; j < s; ++j)
      if (sgn(pre[i][j]) != 0) stacked2.set(i, j, pre[i][j]);
  for (std::int32_t r = 0; r < (std::int32_t)src_rel.size(); ++r)
    for (auto& [j, v] : src_rel[r]) stacked2.set(u + r, j, v);
  stacked2.finish();

  std::vector<SVec> rel_rows;
  for (auto& row : left_kernel(stacked2)) {
    SVec rel;
    for (std::int32_t i = 0; i < u; ++i)
      if (sgn(row[i]) != 0) rel.emplace_back(i, row[i]);
    if (!rel.empty()) rel_rows.push_back(std::move(rel));
  }

  Kernel out{AbGroup(u, std::move(rel_rows)), {}};
  for (auto& x : pre) out.inclusion.push_back(src_.canon_normalize(x));
  return out;
}

// ---------------------------------------------------------------------------

Subgroup::Subgroup(AbGroup g, std::vector<std::vector<Int>> gens)
    : g_(std::move(g)), gens_(std::move(gens)) {
  n_sub_ = (std::int32_t)gens_.size();
  std::vector<SVec> rel = g_.canonical_relation_rows();
  ZMat stacked(n_sub_ + (std::int32_t)rel.size(), g_.canonical_rank());
  for (std::int32_t i = 0; i < n_sub_; ++i)
    for (std::int32_t j = 0; j < g_.canonical_rank(); ++j)
      if (sgn(gens_[i][j]) != 0) stacked.set(i, j, gens_[i][j]);
  for (std::int32_t r = 0; r < (std::int32_t)rel.size(); ++r)
    for (auto& [j, v] : rel[r]) stacked.set(n_sub_ + r, j, v);
  stacked.finish();
  solver_ = smith_normal_form(stacked);
}

AbGroup Subgroup::as_abstract_group() const {
  std::vector<SVec> rel = g_.canonical_relation_rows();
  const std::int32_t u = n_sub_;
  ZMat stacked(u + (std::int32_t)rel.size(), g_.canonical_rank());
  for (std::int32_t i = 0; i < u; ++i)
    for (std::int32_t j = 0; j < g_.canonical_rank(); ++j)
      if (sgn(gens_[i][j]) != 0) stacked.set(i, j, gens_[i][j]);
  for (std::int32_t r = 0; r < (std::int32_t)rel.size(); ++r)
    for (auto& [j, v] : rel[r]) stacked.set(u + r, j, v);
  stacked.finish();
  std::vector<SVec> rel_rows;
  for (auto& row : left_kernel(stacked)) {
    SVec r;
    for (std::int32_t i = 0; i < u; ++i)
      if (sgn(row[i]) != 0) r.emplace_back(i, row[i]);
    if (!r.empty()) rel_rows.push_back(std::move(r));
  }
  return AbGroup(u, std::move(rel_rows));
}

std::optional<std::vector<Int>> Subgroup::coordinates_of(
    const std::vector<Int>& canonical) const {
  auto z = solve_left(solver_, canonical);
  if (!z) return std::nullopt;
  return std::vector<Int>(z->begin(), z->begin() + n_sub_);
}

bool Subgroup::contains(const std::vector<Int>& canonical) const {
  return coordinates_of(canonical).has_value();
}

AbGroup quotient_group(const AbGroup& g,
                       const std::vector<std::vector<Int>>& subgens) {
  std::vector<SVec> rows = g.canonical_relation_rows();
  for (auto& x : subgens) {
    SVec r;
    for (std::int32_t j = 0; j < (std::int32_t)x.size(); ++j)
      if (sgn(x[j]) != 0) r.emplace_back(j, x[j]);
    rows.push_back(std::move(r));
  }
  return AbGroup(g.canonical_rank(), std::move(rows));
}

// ---------------------------------------------------------------------------

HomologyResult homology(const Hom& f, const Hom& g) {
  if (!Hom::compose(f, g).is_zero())
    throw not_a_complex_error("NotAComplex: boundary of boundary is nonzero");

  Hom::Kernel ker = g.kernel();
  Subgroup cycles(g.src(), ker.inclusion);

  const std::int32_t u = (std::int32_t)ker.inclusion.size();
  std::vector<SVec> rows;
  {
    // relations among the cycle generators, modulo relations of the middle
    // term
    std::vector<SVec> rel = g.src().canonical_relation_rows();
    ZMat stacked(u + (std::int32_t)rel.size(), g.src().canonical_rank());
    for (std::int32_t i = 0; i < u; ++i)
      for (std::int32_t j = 0; j < g.src().canonical_rank(); ++j)
        if (sgn(ker.inclusion[i][j]) != 0) stacked.set(i, j, ker.inclusion[i][j]);
    for (std::int32_t r = 0; r < (std::int32_t)rel.size(); ++r)
      for (auto& [j, v] : rel[r]) stacked.set(u + r, j, v);
    stacked.finish();
    for (auto& row : left_kernel(stacked)) {
      SVec r;
      for (std::int32_t i = 0; i < u; ++i)
        if (sgn(row[i]) != 0) r.emplace_back(i, row[i]);
      if (!r.empty()) rows.push_back(std::move(r));
    }
  }
  // boundaries, expressed in the cycle generators
  for (const auto& img : f.canonical_matrix()) {
    if (g.src().class_is_zero(img)) continue;
    auto c = cycles.coordinates_of(img);
    if (!c)
      throw not_a_complex_error(
          "NotAComplex: boundary image is not a cycle");
    SVec r;
    for (std::int32_t i = 0; i < u; ++i)
      if (sgn((*c)[i]) != 0) r.emplace_back(i, (*c)[i]);
    if (!r.empty()) rows.push_back(std::move(r));
  }

  HomologyResult out{AbGroup(u, std::move(rows)), ker.inclusion,
                     std::make_shared<Subgroup>(std::move(cycles))};
  return out;
}

const AbGroup& ZComplexSlice::term_at(int n) const {
  static const AbGroup trivial;
  auto it = term.find(n);
  return it == term.end() ? trivial : it->second;
}

Hom ZComplexSlice::boundary_at(int n) const {
  auto it = boundary.find(n);
  if (it != boundary.end()) return it->second;
  return Hom::zero(term_at(n), term_at(n - 1));
}

AbGroup complex_homology(const ZComplexSlice& slice, int degree) {
  Hom in = slice.boundary_at(degree + 1);
  Hom out = slice.boundary_at(degree);
  return homology(in, out).group;
}

}  // namespace cm::exact
