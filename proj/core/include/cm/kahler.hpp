#pragma once

#include <cstdint>
#include <vector>

#include "cm/algebra.hpp"
#include "cm/fpgroup.hpp"
#include "cm/linalg.hpp"

namespace cm::kahler {

using alg::FinAlgebra;
using alg::SplitNilpotentPair;
using exact::AbGroup;
using exact::FMat;
using exact::Hom;
using exact::RowSpace;
using exact::SubquotientF;
using exact::SVec;

// Formal generators of Omega^n: (n+1)-tuples (i0; i1..in) of basis indices,
// read as b_{i0} db_{i1} ^ ... ^ db_{in}, indexed lexicographically with i0
// slowest.
struct TupleIndexer {
  std::int32_t dim = 0, slots = 0;  // slots = n+1
  std::int64_t count = 0;

  TupleIndexer() = default;
  TupleIndexer(std::int32_t d, std::int32_t n) : dim(d), slots(n + 1) {
    count = 1;
    for (std::int32_t s = 0; s < slots; ++s) {
      count *= dim;
      capacity::check_tensor(count);
    }
  }
  std::int64_t index(const std::vector<std::int32_t>& t) const {
    std::int64_t idx = 0;
    for (std::int32_t s = 0; s < slots; ++s) idx = idx * dim + t[s];
    return idx;
  }
  std::vector<std::int32_t> tuple(std::int64_t idx) const {
    std::vector<std::int32_t> t(slots);
    for (std::int32_t s = slots - 1; s >= 0; --s) {
      t[s] = (std::int32_t)(idx % dim);
      idx /= dim;
    }
    return t;
  }
};

namespace detail {

// relation rows of the Omega^n presentation, generic over the coefficient
// scalar of the output rows (field scalars or integer lifts)
template <FieldScalar K, class Scalar, class Conv>
std::vector<std::vector<std::pair<std::int64_t, Scalar>>> omega_relations(
    const FinAlgebra<K>& r, std::int32_t n, Conv conv, Scalar one) {
  using Row = std::vector<std::pair<std::int64_t, Scalar>>;
  const std::int32_t d = r.dim();
  TupleIndexer ix(d, n);
  std::vector<Row> rows;
  if (n == 0) return rows;

  // enumerate assignments of all slots except the active d-slot
  TupleIndexer rest(d, n - 1);  // i0 plus the other n-1 d-slots
  for (std::int32_t s = 1; s <= n; ++s) {
    for (std::int64_t rid = 0; rid < rest.count; ++rid) {
      auto base = rest.tuple(rid);
      auto with_slot = [&](std::int32_t v) {
        std::vector<std::int32_t> t;
        t.reserve(n + 1);
        std::int32_t src = 0;
        for (std::int32_t dst = 0; dst <= n; ++dst) {
          if (dst == s)
            t.push_back(v);
          else
            t.push_back(base[src++]);
        }
        return ix.index(t);
      };
      const std::int32_t i0 = base[0];

      // d(unit) = 0 in the active slot
      {
        Row row;
        for (std::int32_t j = 0; j < d; ++j) {
          Scalar c = conv(r.unit()[j]);
          if (!ring_traits<Scalar>::is_zero(c))
            row.emplace_back(with_slot(j), c);
        }
        rows.push_back(std::move(row));
      }

      // Leibniz: d(b_a b_b) = b_a db_b + b_b db_a, coefficient folded in
      for (std::int32_t a = 0; a < d; ++a)
        for (std::int32_t b = a; b < d; ++b) {
          Row row;
          for (std::int32_t k = 0; k < d; ++k) {
            Scalar c = conv(r.structure(a, b, k));
            if (!ring_traits<Scalar>::is_zero(c))
              row.emplace_back(with_slot(k), c);
          }
          // -(b_a * b_{i0}) db_b and -(b_b * b_{i0}) db_a: the coefficient
          // slot moves, so rebuild tuples with a fresh i0
          for (std::int32_t m = 0; m < d; ++m) {
            Scalar c1 = conv(r.structure(a, i0, m));
            if (!ring_traits<Scalar>::is_zero(c1)) {
              auto t = rest.tuple(rid);
              std::vector<std::int32_t> full;
              std::int32_t src = 0;
              for (std::int32_t dst = 0; dst <= n; ++dst) {
                if (dst == s)
                  full.push_back(b);
                else if (dst == 0) {
                  full.push_back(m);
                  ++src;
                } else
                  full.push_back(t[src++]);
              }
              row.emplace_back(ix.index(full), -c1);
            }
            Scalar c2 = conv(r.structure(b, i0, m));
            if (!ring_traits<Scalar>::is_zero(c2)) {
              auto t = rest.tuple(rid);
              std::vector<std::int32_t> full;
              std::int32_t src = 0;
              for (std::int32_t dst = 0; dst <= n; ++dst) {
                if (dst == s)
                  full.push_back(a);
                else if (dst == 0) {
                  full.push_back(m);
                  ++src;
                } else
                  full.push_back(t[src++]);
              }
              row.emplace_back(ix.index(full), -c2);
            }
          }
          rows.push_back(std::move(row));
        }
    }
  }

  // alternation on adjacent d-slots
  if (n >= 2) {
    for (std::int64_t gid = 0; gid < ix.count; ++gid) {
      auto t = ix.tuple(gid);
      for (std::int32_t s = 1; s < n; ++s) {
        if (t[s] == t[s + 1]) {
          rows.push_back({{gid, one}});
        } else if (t[s] < t[s + 1]) {
          auto u = t;
          std::swap(u[s], u[s + 1]);
          rows.push_back({{gid, one}, {ix.index(u), one}});
        }
      }
    }
  }
  return rows;
}

inline Int lift_scalar(const Fp& x) { return Int(x.v); }
inline Int lift_scalar(const Rat& x) {
  if (x.get_den() != 1) throw validation_error("non-integer lift");
  return Int(x.get_num());
}

}  // namespace detail

// Presentation of Omega^n_{R/k} as a k-module on formal tuple generators.
template <FieldScalar K>
class OmegaModule {
 public:
  OmegaModule(const FinAlgebra<K>& r, std::int32_t n)
      : r_(&r), n_(n), ix_(r.dim(), n) {
    auto raw = detail::omega_relations<K, K>(
        r, n, [&](const K& c) { return c; }, ring_traits<K>::one(r.model()));
    std::vector<std::vector<K>> rows;
    rows.reserve(raw.size());
    for (auto& sparse : raw) {
      std::vector<K> dense((std::size_t)ix_.count,
                           ring_traits<K>::zero(r.model()));
      for (auto& [g, c] : sparse) dense[g] += c;
      rows.push_back(std::move(dense));
    }
    rel_ = RowSpace<K>(rows, (std::int32_t)ix_.count, r.model());
  }

  const FinAlgebra<K>& algebra() const { return *r_; }
  std::int32_t degree() const { return n_; }
  const TupleIndexer& indexer() const { return ix_; }
  std::int64_t n_formal_gens() const { return ix_.count; }

  // dimension of Omega^n over the base field
  std::int32_t dim() const { return rel_.quotient_dim(); }

  // canonical quotient coordinates of a formal-generator vector
  std::vector<K> reduce(const std::vector<K>& formal) const {
    return rel_.quotient_coords(formal);
  }
  bool element_equal(const std::vector<K>& a, const std::vector<K>& b) const {
    auto ra = reduce(a), rb = reduce(b);
    for (std::size_t i = 0; i < ra.size(); ++i)
      if (!ring_traits<K>::is_zero(ra[i] - rb[i])) return false;
    return true;
  }
  const RowSpace<K>& relation_space() const { return rel_; }

  std::vector<K> zero_formal() const {
    return std::vector<K>((std::size_t)ix_.count,
                          ring_traits<K>::zero(r_->model()));
  }

  // b_{i0} db_{i1} ^ ... as a formal vector
  std::vector<K> formal_generator(const std::vector<std::int32_t>& t) const {
    auto v = zero_formal();
    v[ix_.index(t)] = ring_traits<K>::one(r_->model());
    return v;
  }

  // product of an algebra element with wedge factors: a0 * da1 ^ ... ^ dan
  std::vector<K> form_of(const typename FinAlgebra<K>::Elt& a0,
                         const std::vector<typename FinAlgebra<K>::Elt>&
                             wedge) const {
    auto v = zero_formal();
    const std::int32_t d = r_->dim();
    // expand multilinearly over basis indices of each wedge factor
    std::vector<std::int32_t> pick((std::size_t)n_, 0);
    if ((std::int32_t)wedge.size() != n_)
      throw validation_error("wedge arity mismatch");
    for (;;) {
      K coef = ring_traits<K>::one(r_->model());
      bool zero = false;
      for (std::int32_t s = 0; s < n_ && !zero; ++s) {
        coef *= wedge[s][pick[s]];
        zero = ring_traits<K>::is_zero(coef);
      }
      if (!zero) {
        for (std::int32_t m = 0; m < d; ++m) {
          if (ring_traits<K>::is_zero(a0[m])) continue;
          std::vector<std::int32_t> t;
          t.push_back(m);
          for (std::int32_t s = 0; s < n_; ++s) t.push_back(pick[s]);
          v[ix_.index(t)] += coef * a0[m];
        }
      }
      std::int32_t s = n_ - 1;
      while (s >= 0 && ++pick[s] == d) pick[s--] = 0;
      if (s < 0) break;
    }
    return v;
  }

 private:
  const FinAlgebra<K>* r_;
  std::int32_t n_;
  TupleIndexer ix_;
  RowSpace<K> rel_;
};

// de Rham d on formal generators: r0 dr1 ^ ... ^ drn -> dr0 ^ dr1 ^ ...
template <FieldScalar K>
FMat<K> de_rham_matrix(const FinAlgebra<K>& r, std::int32_t n) {
  TupleIndexer src(r.dim(), n), dst(r.dim(), n + 1);
  FMat<K> m((std::int32_t)src.count, (std::int32_t)dst.count, r.model());
  for (std::int64_t g = 0; g < src.count; ++g) {
    auto t = src.tuple(g);
    for (std::int32_t j = 0; j < r.dim(); ++j) {
      const K& u = r.unit()[j];
      if (ring_traits<K>::is_zero(u)) continue;
      std::vector<std::int32_t> full;
      full.push_back(j);
      for (auto v : t) full.push_back(v);
      m((std::int32_t)g, (std::int32_t)dst.index(full)) += u;
    }
  }
  return m;
}

// absolute (over-Z) presentation for prime-field algebras: the same rows
// with integer lifts plus p * generator for every generator
inline AbGroup omega_group_z(const FinAlgebra<Fp>& r, std::int32_t n) {
  TupleIndexer ix(r.dim(), n);
  auto raw = detail::omega_relations<Fp, Int>(
      r, n, [](const Fp& c) { return detail::lift_scalar(c); }, Int(1));
  std::vector<SVec> rows;
  for (auto& sparse : raw) {
    SVec row;
    for (auto& [g, c] : sparse) row.emplace_back((std::int32_t)g, c);
    exact::svec_normalize(row);
    rows.push_back(std::move(row));
  }
  const Int p = r.coeffs().p;
  for (std::int64_t g = 0; g < ix.count; ++g)
    rows.push_back({{(std::int32_t)g, p}});
  return AbGroup((std::int32_t)ix.count, std::move(rows));
}

// over-Z de Rham map rows (integer lifts of the unit coordinates)
inline std::vector<SVec> de_rham_rows_z(const FinAlgebra<Fp>& r,
                                        std::int32_t n) {
  TupleIndexer src(r.dim(), n), dst(r.dim(), n + 1);
  std::vector<SVec> rows((std::size_t)src.count);
  for (std::int64_t g = 0; g < src.count; ++g) {
    auto t = src.tuple(g);
    SVec row;
    for (std::int32_t j = 0; j < r.dim(); ++j) {
      Int u = detail::lift_scalar(r.unit()[j]);
      if (sgn(u) == 0) continue;
      std::vector<std::int32_t> full;
      full.push_back(j);
      for (auto v : t) full.push_back(v);
      row.emplace_back((std::int32_t)dst.index(full), u);
    }
    exact::svec_normalize(row);
    rows[g] = std::move(row);
  }
  return rows;
}

// the group of Omega^n as an abstract f.p. abelian group: invariant factors
// p^dim for prime fields (cross-checked against the field dimension), free
// of rank dim over Q
template <FieldScalar K>
AbGroup omega_group(const OmegaModule<K>& m) {
  if constexpr (std::is_same_v<K, Fp>) {
    return omega_group_z(m.algebra(), m.degree());
  } else {
    return AbGroup::vector_space(m.dim());
  }
}

// projection matrix on formal generators induced by the pair's surjection:
// a tuple survives iff every slot lies in the complement
template <FieldScalar K>
FMat<K> projection_matrix(const SplitNilpotentPair<K>& pair, std::int32_t n) {
  const auto& r = pair.R();
  const auto& s = pair.S();
  TupleIndexer rix(r.dim(), n), six(s.dim(), n);
  std::vector<std::int32_t> to_s(r.dim(), -1);
  const auto& comp = pair.complement_indices();
  for (std::size_t k = 0; k < comp.size(); ++k) to_s[comp[k]] = (std::int32_t)k;
  FMat<K> m((std::int32_t)rix.count, (std::int32_t)six.count, r.model());
  for (std::int64_t g = 0; g < rix.count; ++g) {
    auto t = rix.tuple(g);
    bool alive = true;
    std::vector<std::int32_t> u;
    for (auto v : t) {
      if (to_s[v] < 0) {
        alive = false;
        break;
      }
      u.push_back(to_s[v]);
    }
    if (alive)
      m((std::int32_t)g, (std::int32_t)six.index(u)) =
          ring_traits<K>::one(r.model());
  }
  return m;
}

// Relative differentials Omega^n_{R,I} = ker(Omega^n_R -> Omega^n_S).
template <FieldScalar K>
class RelativeOmega {
 public:
  RelativeOmega(const SplitNilpotentPair<K>& pair, std::int32_t n)
      : pair_(&pair), omega_r_(pair.R(), n), omega_s_(pair.S(), n) {
    // induced map on quotient coordinates
    FMat<K> p = projection_matrix(pair, n);
    const std::int32_t qr = omega_r_.dim(), qs = omega_s_.dim();
    FMat<K> induced(qr, qs, pair.R().model());
    auto reps = basis_classes();
    for (std::int32_t i = 0; i < qr; ++i) {
      auto img = exact::apply_row(reps[i], p);
      auto c = omega_s_.reduce(img);
      for (std::int32_t j = 0; j < qs; ++j) induced(i, j) = c[j];
    }
    for (auto& v : exact::left_kernel(induced)) basis_.push_back(v);
    basis_ = exact::row_basis(basis_, qr, pair.R().model());
    space_ = RowSpace<K>(basis_, qr, pair.R().model());
  }

  const OmegaModule<K>& ambient() const { return omega_r_; }
  const OmegaModule<K>& quotient_side() const { return omega_s_; }
  std::int32_t dim() const { return (std::int32_t)basis_.size(); }

  // basis vectors in the canonical coordinates of Omega^n_R
  const std::vector<std::vector<K>>& basis() const { return basis_; }
  bool contains(const std::vector<K>& omega_r_coords) const {
    return space_.contains(omega_r_coords);
  }
  std::optional<std::vector<K>> coordinates_of(
      const std::vector<K>& omega_r_coords) const {
    return space_.coordinates_of(omega_r_coords);
  }

 private:
  // formal representatives of the canonical quotient basis of Omega^n_R:
  // unit vectors at non-pivot columns
  std::vector<std::vector<K>> basis_classes() const {
    std::vector<std::vector<K>> out;
    for (std::int32_t c : omega_r_.relation_space().non_pivots()) {
      auto v = omega_r_.zero_formal();
      v[c] = ring_traits<K>::one(pair_->R().model());
      out.push_back(std::move(v));
    }
    return out;
  }

  const SplitNilpotentPair<K>* pair_;
  OmegaModule<K> omega_r_, omega_s_;
  std::vector<std::vector<K>> basis_;
  RowSpace<K> space_;
};

// induced map on canonical quotient coordinates from a formal-generator
// matrix that maps relations into relations
template <FieldScalar K>
FMat<K> induced_on_quotients(const OmegaModule<K>& src,
                             const OmegaModule<K>& dst,
                             const FMat<K>& formal) {
  const std::int32_t qs = src.dim(), qd = dst.dim();
  FMat<K> m(qs, qd, formal.model);
  auto nps = src.relation_space().non_pivots();
  for (std::int32_t i = 0; i < qs; ++i) {
    auto v = src.zero_formal();
    v[nps[i]] = ring_traits<K>::one(formal.model);
    auto img = exact::apply_row(v, formal);
    auto c = dst.reduce(img);
    for (std::int32_t j = 0; j < qd; ++j) m(i, j) = c[j];
  }
  return m;
}

// Omega^n_{R,I} / d Omega^{n-1}_{R,I}: the right-hand side of the symbolic
// comparison theorems, with canonical class coordinates.
template <FieldScalar K>
class OmegaModExact {
 public:
  OmegaModExact(const SplitNilpotentPair<K>& pair, std::int32_t n)
      : rel_n_(pair, n) {
    if (n < 1) throw validation_error("omega_mod_exact needs degree >= 1");
    RelativeOmega<K> rel_prev(pair, n - 1);
    const K model = pair.R().model();

    FMat<K> dmat = induced_on_quotients(
        rel_prev.ambient(), rel_n_.ambient(),
        de_rham_matrix(pair.R(), n - 1));

    // d-images of the relative subspace in degree n-1
    FMat<K> f((std::int32_t)rel_prev.basis().size(), rel_n_.ambient().dim(),
              model);
    for (std::int32_t i = 0; i < f.rows; ++i) {
      auto img = exact::apply_row(rel_prev.basis()[i], dmat);
      for (std::int32_t j = 0; j < f.cols; ++j) f(i, j) = img[j];
    }

    FMat<K> g = induced_on_quotients(
        rel_n_.ambient(), rel_n_.quotient_side(),
        projection_matrix(pair, n));

    classes_ = std::make_shared<SubquotientF<K>>(f, g);
  }

  const RelativeOmega<K>& relative() const { return rel_n_; }
  std::int32_t dim() const { return classes_->dim(); }

  // class of an element given in Omega^n_R canonical coordinates (must lie
  // in the relative subspace)
  std::vector<K> class_coords(const std::vector<K>& omega_r_coords) const {
    return classes_->class_coords(omega_r_coords);
  }
  std::vector<K> class_of_formal(const std::vector<K>& formal) const {
    return class_coords(rel_n_.ambient().reduce(formal));
  }
  bool class_is_zero(const std::vector<K>& omega_r_coords) const {
    for (const K& x : class_coords(omega_r_coords))
      if (!ring_traits<K>::is_zero(x)) return false;
    return true;
  }

 private:
  RelativeOmega<K> rel_n_;
  std::shared_ptr<SubquotientF<K>> classes_;
};

// --------------------------------------------------------------------------
// over-Z lane for prime-field algebras

inline std::vector<SVec> projection_rows_z(const SplitNilpotentPair<Fp>& pair,
                                           std::int32_t n) {
  const auto& r = pair.R();
  const auto& s = pair.S();
  TupleIndexer rix(r.dim(), n), six(s.dim(), n);
  std::vector<std::int32_t> to_s(r.dim(), -1);
  const auto& comp = pair.complement_indices();
  for (std::size_t k = 0; k < comp.size(); ++k) to_s[comp[k]] = (std::int32_t)k;
  std::vector<SVec> rows((std::size_t)rix.count);
  for (std::int64_t g = 0; g < rix.count; ++g) {
    auto t = rix.tuple(g);
    bool alive = true;
    std::vector<std::int32_t> u;
    for (auto v : t) {
      if (to_s[v] < 0) {
        alive = false;
        break;
      }
      u.push_back(to_s[v]);
    }
    if (alive) rows[g] = {{(std::int32_t)six.index(u), Int(1)}};
  }
  return rows;
}

struct RelativeOmegaZ {
  AbGroup group;                            // the kernel, abstractly
  std::vector<std::vector<Int>> inclusion;  // into Omega^n_R canonical coords
  AbGroup ambient;                          // Omega^n_R over Z
};

inline RelativeOmegaZ relative_omega_z(const SplitNilpotentPair<Fp>& pair,
                                       std::int32_t n) {
  AbGroup omega_r = omega_group_z(pair.R(), n);
  AbGroup omega_s = omega_group_z(pair.S(), n);
  Hom proj(omega_r, omega_s, projection_rows_z(pair, n));
  proj.require_well_defined();
  auto ker = proj.kernel();
  return {std::move(ker.group), std::move(ker.inclusion),
          std::move(omega_r)};
}

// Omega^n_{R,I}/dOmega^{n-1}_{R,I} as an abstract abelian group (over Z)
inline AbGroup omega_mod_exact_group_z(const SplitNilpotentPair<Fp>& pair,
                                       std::int32_t n) {
  AbGroup omega_prev = omega_group_z(pair.R(), n - 1);
  AbGroup omega_n = omega_group_z(pair.R(), n);
  AbGroup omega_s = omega_group_z(pair.S(), n);
  AbGroup omega_prev_s = omega_group_z(pair.S(), n - 1);

  Hom proj_prev(omega_prev, omega_prev_s, projection_rows_z(pair, n - 1));
  auto ker_prev = proj_prev.kernel();
  Hom incl = Hom::from_canonical(ker_prev.group, omega_prev,
                                 ker_prev.inclusion);
  Hom d(omega_prev, omega_n, de_rham_rows_z(pair.R(), n - 1));
  Hom f = Hom::compose(incl, d);
  Hom g(omega_n, omega_s, projection_rows_z(pair, n));
  return exact::homology(f, g).group;
}

template <FieldScalar K>
AbGroup omega_mod_exact_group(const SplitNilpotentPair<K>& pair,
                              std::int32_t n) {
  if constexpr (std::is_same_v<K, Fp>) {
    return omega_mod_exact_group_z(pair, n);
  } else {
    OmegaModExact<K> q(pair, n);
    return AbGroup::vector_space(q.dim());
  }
}

template <FieldScalar K>
AbGroup relative_omega_group(const SplitNilpotentPair<K>& pair,
                             std::int32_t n) {
  if constexpr (std::is_same_v<K, Fp>) {
    return relative_omega_z(pair, n).group;
  } else {
    RelativeOmega<K> rel(pair, n);
    return AbGroup::vector_space(rel.dim());
  }
}

}  // namespace cm::kahler
