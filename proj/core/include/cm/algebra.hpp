#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cm/linalg.hpp"
#include "cm/scalars.hpp"

namespace cm::alg {

using exact::FMat;
using exact::RowSpace;

struct not_commutative_error : error {
  using error::error;
};
struct not_associative_error : error {
  using error::error;
};
struct no_unit_error : error {
  using error::error;
};
struct not_an_ideal_error : error {
  using error::error;
};
struct not_nilpotent_error : error {
  using error::error;
};
struct not_split_along_basis_error : error {
  using error::error;
};
struct infinite_coefficients_error : error {
  using error::error;
};
struct non_invertible_denominator_error : error {
  using error::error;
};

// Finite-rank commutative unital algebra over Q or F_p, given by structure
// constants b_i * b_j = sum_k c[i][j][k] b_k.  Elements are coordinate rows.
template <FieldScalar K>
class FinAlgebra {
 public:
  using Elt = std::vector<K>;

  FinAlgebra(Coefficients coeffs, std::int32_t dim,
             std::vector<std::string> names, Elt unit, std::vector<K> table,
             K model)
      : coeffs_(coeffs), dim_(dim), names_(std::move(names)),
        unit_(std::move(unit)), table_(std::move(table)), model_(model) {
    validate();
  }

  const Coefficients& coeffs() const { return coeffs_; }
  std::int32_t dim() const { return dim_; }
  const std::vector<std::string>& basis_names() const { return names_; }
  const Elt& unit() const { return unit_; }
  const K& model() const { return model_; }

  const K& structure(std::int32_t i, std::int32_t j, std::int32_t k) const {
    return table_[((std::size_t)i * dim_ + j) * dim_ + k];
  }

  K zero_scalar() const { return ring_traits<K>::zero(model_); }
  K one_scalar() const { return ring_traits<K>::one(model_); }
  K int_scalar(long n) const;

  Elt zero() const { return Elt(dim_, zero_scalar()); }
  Elt basis_element(std::int32_t i) const {
    Elt e = zero();
    e[i] = one_scalar();
    return e;
  }

  bool is_zero(const Elt& a) const {
    for (const K& x : a)
      if (!ring_traits<K>::is_zero(x)) return false;
    return true;
  }
  bool equal(const Elt& a, const Elt& b) const {
    for (std::int32_t i = 0; i < dim_; ++i)
      if (!ring_traits<K>::is_zero(a[i] - b[i])) return false;
    return true;
  }

  Elt add(const Elt& a, const Elt& b) const {
    Elt c = a;
    for (std::int32_t i = 0; i < dim_; ++i) c[i] += b[i];
    return c;
  }
  Elt sub(const Elt& a, const Elt& b) const {
    Elt c = a;
    for (std::int32_t i = 0; i < dim_; ++i) c[i] -= b[i];
    return c;
  }
  Elt scale(const K& c, const Elt& a) const {
    Elt r = a;
    for (K& x : r) x *= c;
    return r;
  }
  Elt mul(const Elt& a, const Elt& b) const {
    Elt c = zero();
    for (std::int32_t i = 0; i < dim_; ++i) {
      if (ring_traits<K>::is_zero(a[i])) continue;
      for (std::int32_t j = 0; j < dim_; ++j) {
        if (ring_traits<K>::is_zero(b[j])) continue;
        K f = a[i] * b[j];
        for (std::int32_t k = 0; k < dim_; ++k) {
          const K& s = structure(i, j, k);
          if (!ring_traits<K>::is_zero(s)) c[k] += f * s;
        }
      }
    }
    return c;
  }
  Elt power(Elt a, long n) const {
    Elt r = unit_;
    for (long i = 0; i < n; ++i) r = mul(r, a);
    return r;
  }

  // multiplication-by-a matrix in the row convention: x -> x * M_a
  FMat<K> mult_matrix(const Elt& a) const {
    FMat<K> m(dim_, dim_, model_);
    for (std::int32_t j = 0; j < dim_; ++j) {
      Elt prod = mul(basis_element(j), a);
      for (std::int32_t k = 0; k < dim_; ++k) m(j, k) = prod[k];
    }
    return m;
  }

  // two-sided inverse via the linear system x * M_a = 1, if any
  std::optional<Elt> inverse(const Elt& a) const {
    std::vector<std::vector<K>> rows;
    for (std::int32_t j = 0; j < dim_; ++j) rows.push_back(mul(basis_element(j), a));
    RowSpace<K> space(rows, dim_, model_);
    auto c = space.coordinates_of(unit_);
    if (!c) return std::nullopt;
    return Elt(c->begin(), c->end());
  }
  bool is_unit_element(const Elt& a) const { return inverse(a).has_value(); }

  bool is_nilpotent(const Elt& a) const {
    Elt p = a;
    for (std::int32_t k = 1; k <= dim_ + 1; ++k) {
      if (is_zero(p)) return true;
      p = mul(p, a);
    }
    return is_zero(p);
  }
  // smallest nu with a^nu = 0 (requires a nilpotent)
  std::int32_t nilpotency_of(const Elt& a) const {
    Elt p = a;
    std::int32_t k = 1;
    while (!is_zero(p)) {
      p = mul(p, a);
      ++k;
    }
    return k;
  }

  std::string element_to_string(const Elt& a) const;

 private:
  void validate() const;

  Coefficients coeffs_;
  std::int32_t dim_;
  std::vector<std::string> names_;
  Elt unit_;
  std::vector<K> table_;
  K model_;
};

template <FieldScalar K>
void FinAlgebra<K>::validate() const {
  if (coeffs_.kind == Coefficients::Kind::integers)
    throw validation_error("FinAlgebra requires field coefficients");
  for (std::int32_t i = 0; i < dim_; ++i)
    for (std::int32_t j = 0; j < i; ++j)
      for (std::int32_t k = 0; k < dim_; ++k)
        if (!ring_traits<K>::is_zero(structure(i, j, k) - structure(j, i, k)))
          throw not_commutative_error(
              "NotCommutative: b" + std::to_string(i) + "*b" +
              std::to_string(j) + " differs from b" + std::to_string(j) +
              "*b" + std::to_string(i));
  for (std::int32_t i = 0; i < dim_; ++i)
    for (std::int32_t j = 0; j < dim_; ++j)
      for (std::int32_t l = 0; l < dim_; ++l) {
        Elt lhs = mul(mul(basis_element(i), basis_element(j)),
                      basis_element(l));
        Elt rhs = mul(basis_element(i),
                      mul(basis_element(j), basis_element(l)));
        if (!equal(lhs, rhs))
          throw not_associative_error("NotAssociative at (" +
                                      std::to_string(i) + "," +
                                      std::to_string(j) + "," +
                                      std::to_string(l) + ")");
      }
  for (std::int32_t i = 0; i < dim_; ++i) {
    Elt b = basis_element(i);
    if (!equal(mul(unit_, b), b) || !equal(mul(b, unit_), b))
      throw no_unit_error("NoUnit: designated unit does not act as identity");
  }
}

template <FieldScalar K>
K FinAlgebra<K>::int_scalar(long n) const {
  K r = zero_scalar();
  K one = one_scalar();
  long a = n < 0 ? -n : n;
  for (long i = 0; i < a; ++i) r += one;
  if (n < 0) r = -r;
  return r;
}

template <FieldScalar K>
std::string FinAlgebra<K>::element_to_string(const Elt& a) const {
  std::string s;
  for (std::int32_t i = 0; i < dim_; ++i) {
    if (ring_traits<K>::is_zero(a[i])) continue;
    std::string coef;
    if constexpr (std::is_same_v<K, Rat>) {
      coef = a[i].get_str();
    } else {
      coef = std::to_string(a[i].v);
    }
    std::string term;
    if (names_[i] == "1")
      term = coef;
    else if (coef == "1")
      term = names_[i];
    else
      term = coef + "*" + names_[i];
    if (!s.empty()) s += " + ";
    s += term;
  }
  return s.empty() ? "0" : s;
}

// --------------------------------------------------------------------------
// constructors

template <FieldScalar K>
FinAlgebra<K> make_structure_algebra(Coefficients coeffs, std::int32_t dim,
                                     std::vector<std::string> names,
                                     std::vector<K> unit, std::vector<K> table,
                                     K model) {
  if ((std::int64_t)dim * dim * dim != (std::int64_t)table.size())
    throw validation_error("structure constant table must have dim^3 entries");
  return FinAlgebra<K>(coeffs, dim, std::move(names), std::move(unit),
                       std::move(table), model);
}

// monomial-basis truncated polynomial algebra k[x1,...,xm]/(x_i^{n_i})
template <FieldScalar K>
FinAlgebra<K> truncated_polynomial(
    Coefficients coeffs,
    const std::vector<std::pair<std::string, std::int32_t>>& vars, K model) {
  std::int64_t dim = 1;
  for (auto& [name, p] : vars) {
    if (p < 2) throw validation_error("truncated power must be >= 2");
    dim *= p;
    capacity::check_tensor(dim);
  }
  const std::int32_t n = (std::int32_t)vars.size();
  const std::int32_t d = (std::int32_t)dim;

  // exponent tuples in mixed radix, first variable fastest
  auto exps_of = [&](std::int32_t idx) {
    std::vector<std::int32_t> e(n);
    for (std::int32_t v = 0; v < n; ++v) {
      e[v] = idx % vars[v].second;
      idx /= vars[v].second;
    }
    return e;
  };
  auto idx_of = [&](const std::vector<std::int32_t>& e) {
    std::int32_t idx = 0;
    for (std::int32_t v = n - 1; v >= 0; --v) idx = idx * vars[v].second + e[v];
    return idx;
  };

  std::vector<std::string> names(d);
  for (std::int32_t i = 0; i < d; ++i) {
    auto e = exps_of(i);
    std::string s;
    for (std::int32_t v = 0; v < n; ++v) {
      if (e[v] == 0) continue;
      if (!s.empty()) s += "*";
      s += vars[v].first;
      if (e[v] > 1) s += "^" + std::to_string(e[v]);
    }
    names[i] = s.empty() ? "1" : s;
  }

  K zero = ring_traits<K>::zero(model);
  K one = ring_traits<K>::one(model);
  std::vector<K> table((std::size_t)d * d * d, zero);
  for (std::int32_t i = 0; i < d; ++i)
    for (std::int32_t j = 0; j < d; ++j) {
      auto ei = exps_of(i), ej = exps_of(j);
      bool dead = false;
      std::vector<std::int32_t> ek(n);
      for (std::int32_t v = 0; v < n; ++v) {
        ek[v] = ei[v] + ej[v];
        if (ek[v] >= vars[v].second) dead = true;
      }
      if (!dead) table[((std::size_t)i * d + j) * d + idx_of(ek)] = one;
    }

  std::vector<K> unit(d, zero);
  unit[0] = one;
  return FinAlgebra<K>(coeffs, d, std::move(names), std::move(unit),
                       std::move(table), model);
}

// --------------------------------------------------------------------------

// Split nilpotent extension R ->> S with basis-aligned ideal: the ideal is
// spanned by a sub-list of the algebra basis and the complementary basis
// elements span a unital subalgebra isomorphic to S.
template <FieldScalar K>
class SplitNilpotentPair {
 public:
  SplitNilpotentPair(FinAlgebra<K> r, std::vector<std::int32_t> ideal_basis);

  const FinAlgebra<K>& R() const { return r_; }
  const FinAlgebra<K>& S() const { return *s_; }
  const std::vector<std::int32_t>& ideal_indices() const { return ideal_; }
  const std::vector<std::int32_t>& complement_indices() const {
    return comp_;
  }
  std::int32_t nilpotency_index() const { return nindex_; }

  bool in_ideal(const typename FinAlgebra<K>::Elt& x) const {
    for (std::int32_t i : comp_)
      if (!ring_traits<K>::is_zero(x[i])) return false;
    return true;
  }

  // projection R -> S (drop ideal coordinates)
  typename FinAlgebra<K>::Elt project(
      const typename FinAlgebra<K>::Elt& x) const {
    typename FinAlgebra<K>::Elt y;
    y.reserve(comp_.size());
    for (std::int32_t i : comp_) y.push_back(x[i]);
    return y;
  }
  // ring section S -> R (complementary basis inclusion)
  typename FinAlgebra<K>::Elt section(
      const typename FinAlgebra<K>::Elt& s) const {
    auto y = r_.zero();
    for (std::size_t k = 0; k < comp_.size(); ++k) y[comp_[k]] = s[k];
    return y;
  }

 private:
  FinAlgebra<K> r_;
  std::vector<std::int32_t> ideal_, comp_;
  std::shared_ptr<FinAlgebra<K>> s_;
  std::int32_t nindex_ = 0;
};

template <FieldScalar K>
SplitNilpotentPair<K>::SplitNilpotentPair(FinAlgebra<K> r,
                                          std::vector<std::int32_t> ideal)
    : r_(std::move(r)), ideal_(std::move(ideal)) {
  const std::int32_t d = r_.dim();
  std::vector<char> in_ideal(d, 0);
  for (std::int32_t i : ideal_) in_ideal[i] = 1;
  for (std::int32_t i = 0; i < d; ++i)
    if (!in_ideal[i]) comp_.push_back(i);

  // a spanned unit makes the generated ideal the whole ring
  {
    std::vector<std::vector<K>> rows;
    for (std::int32_t i : ideal_) {
      auto e = r_.basis_element(i);
      if (r_.is_unit_element(e))
        throw not_nilpotent_error(
            "NotNilpotent: ideal contains an invertible element");
      rows.push_back(std::move(e));
    }
    RowSpace<K> span(rows, d, r_.model());
    if (span.contains(r_.unit()))
      throw not_nilpotent_error("NotNilpotent: ideal contains the unit");
  }

  // R * I <= I on basis products
  for (std::int32_t i = 0; i < d; ++i)
    for (std::int32_t j : ideal_)
      for (std::int32_t k : comp_)
        if (!ring_traits<K>::is_zero(r_.structure(i, j, k)))
          throw not_an_ideal_error("NotAnIdeal: b" + std::to_string(i) +
                                   "*b" + std::to_string(j) +
                                   " leaves the span");

  // complement must be a unital subalgebra for the basis-aligned section
  for (std::int32_t i : ideal_)
    if (!ring_traits<K>::is_zero(r_.unit()[i]))
      throw not_split_along_basis_error(
          "NotSplitAlongBasis: unit has ideal components");
  for (std::int32_t i : comp_)
    for (std::int32_t j : comp_)
      for (std::int32_t k : ideal_)
        if (!ring_traits<K>::is_zero(r_.structure(i, j, k)))
          throw not_split_along_basis_error(
              "NotSplitAlongBasis: complement is not a subalgebra");

  // nilpotency: subspace powers I^m until zero
  {
    std::vector<std::vector<K>> cur;
    for (std::int32_t i : ideal_) cur.push_back(r_.basis_element(i));
    nindex_ = 1;
    while (!cur.empty()) {
      if (nindex_ > d + 1)
        throw not_nilpotent_error("NotNilpotent: ideal powers do not vanish");
      std::vector<std::vector<K>> next;
      for (std::int32_t i : ideal_)
        for (auto& x : cur) next.push_back(r_.mul(r_.basis_element(i), x));
      cur = exact::row_basis(next, d, r_.model());
      ++nindex_;
    }
  }

  // quotient algebra on the complementary basis
  const std::int32_t ds = (std::int32_t)comp_.size();
  std::vector<std::string> names;
  for (std::int32_t i : comp_) names.push_back(r_.basis_names()[i]);
  std::vector<K> unit = project(r_.unit());
  std::vector<K> table((std::size_t)ds * ds * ds,
                       ring_traits<K>::zero(r_.model()));
  for (std::int32_t a = 0; a < ds; ++a)
    for (std::int32_t b = 0; b < ds; ++b)
      for (std::int32_t c = 0; c < ds; ++c)
        table[((std::size_t)a * ds + b) * ds + c] =
            r_.structure(comp_[a], comp_[b], comp_[c]);
  s_ = std::make_shared<FinAlgebra<K>>(r_.coeffs(), ds, std::move(names),
                                       std::move(unit), std::move(table),
                                       r_.model());
}

// --------------------------------------------------------------------------
// finite enumeration (prime field coefficients only)

inline void require_finite(const Coefficients& c, const char* what) {
  if (c.kind != Coefficients::Kind::prime_field)
    throw infinite_coefficients_error(std::string("InfiniteCoefficients: ") +
                                      what +
                                      " requires prime field coefficients");
}

// all elements of an F_p algebra in deterministic lexicographic order
std::vector<std::vector<Fp>> enumerate_elements(const FinAlgebra<Fp>& r);

struct UnitTable {
  std::vector<std::vector<Fp>> units;     // each invertible element
  std::vector<std::vector<Fp>> inverses;  // parallel
  std::map<std::vector<std::int64_t>, std::int32_t> index;  // coords -> id

  std::int32_t find(const std::vector<Fp>& u) const;
};

UnitTable enumerate_units(const FinAlgebra<Fp>& r);

bool is_m_fold_stable(const FinAlgebra<Fp>& r, std::int32_t m);

// sizes of the residue fields R/m, computed via the Jacobson radical and
// idempotent splitting of the semisimple quotient
std::vector<std::int64_t> residue_field_sizes(const FinAlgebra<Fp>& r);

// --------------------------------------------------------------------------
// nilpotent exp/log

// scalar 1/n with divisibility check
template <FieldScalar K>
K inv_int_scalar(const FinAlgebra<K>& a, long n) {
  if constexpr (std::is_same_v<K, Fp>) {
    if (n % a.model().p == 0)
      throw non_invertible_denominator_error(
          "NonInvertibleDenominator: " + std::to_string(n) +
          " is not invertible in F" + std::to_string(a.model().p));
  }
  K v = a.int_scalar(n);
  return ring_traits<K>::inv(v);
}

// log(1+x) = x - x^2/2 + x^3/3 - ... for nilpotent x
template <FieldScalar K>
typename FinAlgebra<K>::Elt log_one_plus(const FinAlgebra<K>& a,
                                         const typename FinAlgebra<K>::Elt& x) {
  if (!a.is_nilpotent(x))
    throw not_nilpotent_error("NotNilpotent: log requires a nilpotent");
  std::int32_t nu = a.nilpotency_of(x);
  auto sum = a.zero();
  auto p = x;
  for (std::int32_t k = 1; k <= nu - 1; ++k) {
    K c = inv_int_scalar(a, k);
    if (k % 2 == 0) c = -c;
    sum = a.add(sum, a.scale(c, p));
    p = a.mul(p, x);
  }
  return sum;
}

// exp(x) = 1 + x + x^2/2! + ... for nilpotent x
template <FieldScalar K>
typename FinAlgebra<K>::Elt exp_nilpotent(const FinAlgebra<K>& a,
                                          const typename FinAlgebra<K>::Elt& x) {
  if (!a.is_nilpotent(x))
    throw not_nilpotent_error("NotNilpotent: exp requires a nilpotent");
  std::int32_t nu = a.nilpotency_of(x);
  auto sum = a.unit();
  auto p = x;
  Int fact = 1;
  for (std::int32_t k = 1; k <= nu - 1; ++k) {
    fact *= k;
    K c;
    if constexpr (std::is_same_v<K, Fp>) {
      Int red = fact % a.model().p;
      if (sgn(red) == 0)
        throw non_invertible_denominator_error(
            "NonInvertibleDenominator: " + std::to_string(k) +
            "! is not invertible in F" + std::to_string(a.model().p));
      c = ring_traits<K>::inv(Fp(red.get_si(), a.model().p));
    } else {
      c = ring_traits<K>::inv(K(Rat(fact)));
    }
    sum = a.add(sum, a.scale(c, p));
    p = a.mul(p, x);
  }
  return sum;
}

// parse "1 + 2*e - x^2" style linear combinations of basis monomials;
// coefficients are integers or integer fractions p/q
template <FieldScalar K>
typename FinAlgebra<K>::Elt parse_element(const FinAlgebra<K>& a,
                                          const std::string& text) {
  auto elt = a.zero();
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
  };
  auto parse_int = [&]() -> long {
    std::size_t start = i;
    while (i < text.size() && std::isdigit((unsigned char)text[i])) ++i;
    if (i == start) throw validation_error("expected a number in '" + text +
                                           "' at offset " +
                                           std::to_string(start));
    return std::stol(text.substr(start, i - start));
  };
  auto find_name = [&]() -> std::int32_t {
    // longest basis-name match at position i
    std::int32_t best = -1;
    std::size_t best_len = 0;
    for (std::int32_t b = 0; b < a.dim(); ++b) {
      const std::string& n = a.basis_names()[b];
      if (n.size() > best_len && text.compare(i, n.size(), n) == 0) {
        best = b;
        best_len = n.size();
      }
    }
    if (best >= 0) i += best_len;
    return best;
  };

  bool first = true;
  skip_ws();
  while (i < text.size()) {
    long sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = (text[i] == '-') ? -1 : 1;
      ++i;
      skip_ws();
    } else if (!first) {
      throw validation_error("expected '+' or '-' in '" + text +
                             "' at offset " + std::to_string(i));
    }
    first = false;

    K coeff = a.one_scalar();
    bool have_coeff = false;
    if (i < text.size() && std::isdigit((unsigned char)text[i])) {
      long num = parse_int();
      coeff = a.int_scalar(num);
      have_coeff = true;
      skip_ws();
      if (i < text.size() && text[i] == '/') {
        ++i;
        skip_ws();
        long den = parse_int();
        coeff = coeff * inv_int_scalar(a, den);
        skip_ws();
      }
    }
    if (sign < 0) coeff = -coeff;

    skip_ws();
    if (i < text.size() && text[i] == '*') {
      ++i;
      skip_ws();
    }
    std::int32_t b = -1;
    if (i < text.size() && text[i] != '+' && text[i] != '-') {
      b = find_name();
      if (b < 0)
        throw validation_error("unknown basis element in '" + text +
                               "' at offset " + std::to_string(i));
    } else if (!have_coeff) {
      throw validation_error("dangling sign in '" + text + "'");
    }
    if (b < 0) {
      // bare scalar: multiple of the unit
      auto u = a.scale(coeff, a.unit());
      elt = a.add(elt, u);
    } else {
      elt[b] += coeff;
    }
    skip_ws();
  }
  return elt;
}

}  // namespace cm::alg
