#include "cm/algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace cm::alg {

using exact::row_basis;

namespace {

std::int64_t pow_i64(std::int64_t b, std::int32_t e) {
  std::int64_t r = 1;
  while (e-- > 0) {
    r *= b;
    if (r > (std::int64_t)4e18 / (b > 0 ? b : 1)) break;
  }
  return r;
}

std::vector<std::int64_t> coords_key(const std::vector<Fp>& v) {
  std::vector<std::int64_t> k(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) k[i] = v[i].v;
  return k;
}

}  // namespace

std::vector<std::vector<Fp>> enumerate_elements(const FinAlgebra<Fp>& r) {
  require_finite(r.coeffs(), "element enumeration");
  const std::int64_t p = r.coeffs().p;
  const std::int32_t d = r.dim();
  std::int64_t count = pow_i64(p, d);
  capacity::check_units(count);
  std::vector<std::vector<Fp>> out;
  out.reserve(count);
  std::vector<std::int64_t> c(d, 0);
  for (std::int64_t n = 0; n < count; ++n) {
    std::vector<Fp> e(d);
    for (std::int32_t i = 0; i < d; ++i) e[i] = Fp(c[i], p);
    out.push_back(std::move(e));
    for (std::int32_t i = d - 1; i >= 0; --i) {
      if (++c[i] < p) break;
      c[i] = 0;
    }
  }
  return out;
}

std::int32_t UnitTable::find(const std::vector<Fp>& u) const {
  auto it = index.find(coords_key(u));
  return it == index.end() ? -1 : it->second;
}

UnitTable enumerate_units(const FinAlgebra<Fp>& r) {
  UnitTable t;
  for (auto& e : enumerate_elements(r)) {
    auto inv = r.inverse(e);
    if (!inv) continue;
    t.index[coords_key(e)] = (std::int32_t)t.units.size();
    t.units.push_back(e);
    t.inverses.push_back(*inv);
  }
  return t;
}

bool is_m_fold_stable(const FinAlgebra<Fp>& r, std::int32_t m) {
  require_finite(r.coeffs(), "stability");
  if (m < 1) throw validation_error("m must be >= 1");
  auto elems = enumerate_elements(r);
  const std::int64_t n = (std::int64_t)elems.size();

  std::vector<char> is_unit(n, 0);
  std::map<std::vector<std::int64_t>, std::int32_t> index;
  for (std::int64_t i = 0; i < n; ++i) index[coords_key(elems[i])] = (std::int32_t)i;
  for (std::int64_t i = 0; i < n; ++i)
    is_unit[i] = r.is_unit_element(elems[i]) ? 1 : 0;
  auto idx_of = [&](const std::vector<Fp>& v) { return index.at(coords_key(v)); };

  // For a unimodular pair P = (a, b), BadS(P) = { s : a + b*s not a unit }.
  // The ring is m-fold stable iff no m of these sets cover all of R: a tuple
  // (P_1..P_m) defeats every s exactly when the union of their bad sets is R.
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> bad_sets;
  std::map<std::vector<std::uint64_t>, char> seen;

  for (std::int64_t ai = 0; ai < n; ++ai)
    for (std::int64_t bi = 0; bi < n; ++bi) {
      // unimodular: the ideal (a, b) contains 1
      std::vector<std::vector<Fp>> rows;
      for (std::int32_t j = 0; j < r.dim(); ++j) {
        rows.push_back(r.mul(r.basis_element(j), elems[ai]));
        rows.push_back(r.mul(r.basis_element(j), elems[bi]));
      }
      RowSpace<Fp> ideal(rows, r.dim(), r.model());
      if (!ideal.contains(r.unit())) continue;

      std::vector<std::uint64_t> bits(words, 0);
      bool any = false;
      for (std::int64_t s = 0; s < n; ++s) {
        auto val = r.add(elems[ai], r.mul(elems[bi], elems[s]));
        if (!is_unit[idx_of(val)]) {
          bits[s >> 6] |= 1ull << (s & 63);
          any = true;
        }
      }
      if (!any) continue;  // never bad, cannot defeat any s
      if (!seen.emplace(bits, 1).second) continue;
      bad_sets.push_back(std::move(bits));
    }

  // keep only maximal sets
  auto subset_of = [&](const std::vector<std::uint64_t>& a,
                       const std::vector<std::uint64_t>& b) {
    for (std::size_t w = 0; w < words; ++w)
      if ((a[w] & ~b[w]) != 0) return false;
    return true;
  };
  std::vector<std::vector<std::uint64_t>> maximal;
  for (auto& s : bad_sets) {
    bool dominated = false;
    for (auto& t : bad_sets)
      if (&s != &t && subset_of(s, t) && !(subset_of(t, s) && &s < &t)) {
        dominated = true;
        break;
      }
    if (!dominated) maximal.push_back(s);
  }
  std::sort(maximal.begin(), maximal.end());

  std::vector<std::uint64_t> full(words, 0);
  for (std::int64_t s = 0; s < n; ++s) full[s >> 6] |= 1ull << (s & 63);

  // depth-first search for <= m bad sets covering everything
  std::vector<std::uint64_t> acc(words, 0);
  auto covered = [&](const std::vector<std::uint64_t>& a) {
    for (std::size_t w = 0; w < words; ++w)
      if (a[w] != full[w]) return false;
    return true;
  };
  std::function<bool(std::size_t, std::int32_t, std::vector<std::uint64_t>)>
      search = [&](std::size_t start, std::int32_t left,
                   std::vector<std::uint64_t> cur) -> bool {
    if (covered(cur)) return true;
    if (left == 0) return false;
    for (std::size_t i = start; i < maximal.size(); ++i) {
      std::vector<std::uint64_t> next = cur;
      bool grew = false;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t u = next[w] | maximal[i][w];
        grew |= (u != next[w]);
        next[w] = u;
      }
      if (!grew) continue;
      if (search(i + 1, left - 1, std::move(next))) return true;
    }
    return false;
  };
  return !search(0, m, acc);
}

namespace {

// recursively split a commutative semisimple algebra into fields
void split_semisimple(const FinAlgebra<Fp>& q,
                      std::vector<std::int64_t>& sizes) {
  auto elems = enumerate_elements(q);
  for (auto& e : elems) {
    if (q.is_zero(e) || q.equal(e, q.unit())) continue;
    if (!q.equal(q.mul(e, e), e)) continue;
    // nontrivial idempotent: split into e*Q and (1-e)*Q
    for (auto part : {e, q.sub(q.unit(), e)}) {
      std::vector<std::vector<Fp>> span;
      for (std::int32_t i = 0; i < q.dim(); ++i)
        span.push_back(q.mul(part, q.basis_element(i)));
      auto basis = row_basis(span, q.dim(), q.model());
      RowSpace<Fp> space(basis, q.dim(), q.model());
      const std::int32_t d = (std::int32_t)basis.size();
      std::vector<Fp> table((std::size_t)d * d * d, Fp::zero_of(q.model().p));
      for (std::int32_t i = 0; i < d; ++i)
        for (std::int32_t j = 0; j < d; ++j) {
          auto prod = q.mul(basis[i], basis[j]);
          auto c = space.coordinates_of(prod);
          for (std::int32_t k = 0; k < d; ++k)
            table[((std::size_t)i * d + j) * d + k] = (*c)[k];
        }
      auto unit_c = space.coordinates_of(part);
      std::vector<std::string> names(d);
      for (std::int32_t i = 0; i < d; ++i) names[i] = "v" + std::to_string(i);
      FinAlgebra<Fp> sub(q.coeffs(), d, names,
                         std::vector<Fp>(unit_c->begin(), unit_c->end()),
                         std::move(table), q.model());
      split_semisimple(sub, sizes);
    }
    return;
  }
  // no nontrivial idempotent: a finite field
  sizes.push_back(pow_i64(q.coeffs().p, q.dim()));
}

}  // namespace

std::vector<std::int64_t> residue_field_sizes(const FinAlgebra<Fp>& r) {
  require_finite(r.coeffs(), "residue fields");
  auto elems = enumerate_elements(r);

  // Jacobson radical: z such that 1 + r*z is a unit for every r
  std::vector<std::vector<Fp>> radical;
  for (auto& z : elems) {
    bool in_j = true;
    for (auto& x : elems) {
      auto v = r.add(r.unit(), r.mul(x, z));
      if (!r.is_unit_element(v)) {
        in_j = false;
        break;
      }
    }
    if (in_j) radical.push_back(z);
  }
  RowSpace<Fp> jspace(row_basis(radical, r.dim(), r.model()), r.dim(),
                      r.model());

  // quotient R/J on the non-pivot coordinates: the class of e_j for each
  // non-pivot column j is a basis, and quotient_coords is the class map
  const std::vector<std::int32_t> keep = jspace.non_pivots();
  const std::int32_t d = (std::int32_t)keep.size();

  std::vector<Fp> table((std::size_t)d * d * d, Fp::zero_of(r.coeffs().p));
  for (std::int32_t i = 0; i < d; ++i)
    for (std::int32_t j = 0; j < d; ++j) {
      auto prod = r.mul(r.basis_element(keep[i]), r.basis_element(keep[j]));
      auto c = jspace.quotient_coords(prod);
      for (std::int32_t k = 0; k < d; ++k)
        table[((std::size_t)i * d + j) * d + k] = c[k];
    }
  auto unit_c = jspace.quotient_coords(r.unit());
  std::vector<std::string> names(d);
  for (std::int32_t i = 0; i < d; ++i) names[i] = "q" + std::to_string(i);
  FinAlgebra<Fp> quo(r.coeffs(), d, names, unit_c, std::move(table),
                     r.model());

  std::vector<std::int64_t> sizes;
  split_semisimple(quo, sizes);
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace cm::alg
