#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "cm/scalars.hpp"

namespace cm::exact {

// Dense matrix over a field, row-vector convention: elements are rows x,
// a map with matrix M sends x to x*M.
template <FieldScalar K>
struct FMat {
  std::int32_t rows = 0, cols = 0;
  std::vector<K> a;
  K model{};  // scalar prototype, carries the modulus for F_p

  FMat() = default;
  FMat(std::int32_t r, std::int32_t c, K m)
      : rows(r), cols(c), a((std::size_t)r * c, ring_traits<K>::zero(m)),
        model(m) {}

  K& operator()(std::int32_t i, std::int32_t j) {
    return a[(std::size_t)i * cols + j];
  }
  const K& operator()(std::int32_t i, std::int32_t j) const {
    return a[(std::size_t)i * cols + j];
  }

  static FMat identity(std::int32_t n, K m) {
    FMat out(n, n, m);
    for (std::int32_t i = 0; i < n; ++i) out(i, i) = ring_traits<K>::one(m);
    return out;
  }

  std::vector<K> row_vec(std::int32_t i) const {
    return std::vector<K>(a.begin() + (std::size_t)i * cols,
                          a.begin() + (std::size_t)(i + 1) * cols);
  }
};

template <FieldScalar K>
FMat<K> fmul(const FMat<K>& x, const FMat<K>& y) {
  FMat<K> z(x.rows, y.cols, x.model);
  for (std::int32_t i = 0; i < x.rows; ++i)
    for (std::int32_t k = 0; k < x.cols; ++k) {
      const K& v = x(i, k);
      if (ring_traits<K>::is_zero(v)) continue;
      for (std::int32_t j = 0; j < y.cols; ++j)
        z(i, j) += v * y(k, j);
    }
  return z;
}

template <FieldScalar K>
std::vector<K> apply_row(const std::vector<K>& x, const FMat<K>& m) {
  assert((std::int32_t)x.size() == m.rows);
  std::vector<K> y(m.cols, ring_traits<K>::zero(m.model));
  for (std::int32_t i = 0; i < m.rows; ++i) {
    if (ring_traits<K>::is_zero(x[i])) continue;
    for (std::int32_t j = 0; j < m.cols; ++j) y[j] += x[i] * m(i, j);
  }
  return y;
}

// In-place reduced row echelon form restricted to the first `lead_cols`
// columns (trailing columns ride along, e.g. an identity tracker).
// Returns the pivot columns.
template <FieldScalar K>
std::vector<std::int32_t> rref(FMat<K>& m, std::int32_t lead_cols) {
  std::vector<std::int32_t> pivots;
  std::int32_t r = 0;
  for (std::int32_t c = 0; c < lead_cols && r < m.rows; ++c) {
    std::int32_t p = -1;
    for (std::int32_t i = r; i < m.rows; ++i)
      if (!ring_traits<K>::is_zero(m(i, c))) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (std::int32_t j = 0; j < m.cols; ++j) std::swap(m(r, j), m(p, j));
    K inv = ring_traits<K>::inv(m(r, c));
    for (std::int32_t j = 0; j < m.cols; ++j) m(r, j) *= inv;
    for (std::int32_t i = 0; i < m.rows; ++i) {
      if (i == r || ring_traits<K>::is_zero(m(i, c))) continue;
      K f = m(i, c);
      for (std::int32_t j = 0; j < m.cols; ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <FieldScalar K>
std::int32_t rank(FMat<K> m) {
  return (std::int32_t)rref(m, m.cols).size();
}

// Basis of { x : x * M = 0 } as rows.
template <FieldScalar K>
std::vector<std::vector<K>> left_kernel(const FMat<K>& m) {
  FMat<K> aug(m.rows, m.cols + m.rows, m.model);
  for (std::int32_t i = 0; i < m.rows; ++i) {
    for (std::int32_t j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
    aug(i, m.cols + i) = ring_traits<K>::one(m.model);
  }
  rref(aug, m.cols);
  std::vector<std::vector<K>> out;
  for (std::int32_t i = 0; i < m.rows; ++i) {
    bool zero = true;
    for (std::int32_t j = 0; j < m.cols && zero; ++j)
      zero = ring_traits<K>::is_zero(aug(i, j));
    if (!zero) continue;
    std::vector<K> x(m.rows, ring_traits<K>::zero(m.model));
    for (std::int32_t j = 0; j < m.rows; ++j) x[j] = aug(i, m.cols + j);
    out.push_back(std::move(x));
  }
  return out;
}

// Row-reduced basis of a collection of row vectors.
template <FieldScalar K>
std::vector<std::vector<K>> row_basis(const std::vector<std::vector<K>>& rows,
                                      std::int32_t n, K model) {
  FMat<K> m((std::int32_t)rows.size(), n, model);
  for (std::int32_t i = 0; i < m.rows; ++i)
    for (std::int32_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  auto piv = rref(m, n);
  std::vector<std::vector<K>> out;
  for (std::size_t i = 0; i < piv.size(); ++i) out.push_back(m.row_vec((std::int32_t)i));
  return out;
}

// Echelonized subspace of K^n supporting membership tests, coordinates, and
// canonical normal forms on the quotient K^n / U.
template <FieldScalar K>
class RowSpace {
 public:
  RowSpace() = default;
  RowSpace(const std::vector<std::vector<K>>& rows, std::int32_t n, K model)
      : n_(n), model_(model),
        m_((std::int32_t)rows.size(), n + (std::int32_t)rows.size(), model) {
    for (std::int32_t i = 0; i < m_.rows; ++i) {
      for (std::int32_t j = 0; j < n; ++j) m_(i, j) = rows[i][j];
      m_(i, n + i) = ring_traits<K>::one(model);
    }
    pivots_ = rref(m_, n);
  }

  std::int32_t ambient_dim() const { return n_; }
  std::int32_t dim() const { return (std::int32_t)pivots_.size(); }
  const std::vector<std::int32_t>& pivots() const { return pivots_; }
  // ambient coordinates not used as pivots, in ascending order
  std::vector<std::int32_t> non_pivots() const {
    std::vector<std::int32_t> out;
    std::size_t pi = 0;
    for (std::int32_t j = 0; j < n_; ++j) {
      if (pi < pivots_.size() && pivots_[pi] == j) {
        ++pi;
        continue;
      }
      out.push_back(j);
    }
    return out;
  }

  // v reduced modulo the subspace; zero iff v is a member.  The surviving
  // coordinates at non-pivot columns are a canonical form on the quotient.
  std::vector<K> reduce(std::vector<K> v) const {
    for (std::size_t r = 0; r < pivots_.size(); ++r) {
      const K& f = v[pivots_[r]];
      if (ring_traits<K>::is_zero(f)) continue;
      K c = f;
      for (std::int32_t j = 0; j < n_; ++j) v[j] -= c * m_((std::int32_t)r, j);
    }
    return v;
  }

  bool contains(const std::vector<K>& v) const {
    for (const K& x : reduce(v))
      if (!ring_traits<K>::is_zero(x)) return false;
    return true;
  }

  // coefficients over the ORIGINAL generating rows with v = sum c_i rows_i
  std::optional<std::vector<K>> coordinates_of(std::vector<K> v) const {
    std::vector<K> c((std::size_t)m_.rows, ring_traits<K>::zero(model_));
    for (std::size_t r = 0; r < pivots_.size(); ++r) {
      const K& f = v[pivots_[r]];
      if (ring_traits<K>::is_zero(f)) continue;
      K fv = f;
      for (std::int32_t j = 0; j < n_; ++j)
        v[j] -= fv * m_((std::int32_t)r, j);
      for (std::int32_t j = 0; j < m_.rows; ++j)
        c[j] += fv * m_((std::int32_t)r, n_ + j);
    }
    for (const K& x : v)
      if (!ring_traits<K>::is_zero(x)) return std::nullopt;
    return c;
  }

  // i-th row of the echelonized basis (ambient coordinates)
  std::vector<K> basis_row(std::int32_t i) const {
    std::vector<K> out(n_, ring_traits<K>::zero(model_));
    for (std::int32_t j = 0; j < n_; ++j) out[j] = m_(i, j);
    return out;
  }

  // quotient dimension and canonical quotient coordinates (non-pivot slots)
  std::int32_t quotient_dim() const { return n_ - dim(); }
  std::vector<K> quotient_coords(const std::vector<K>& v) const {
    std::vector<K> red = reduce(v);
    std::vector<K> out;
    out.reserve(quotient_dim());
    std::size_t pi = 0;
    for (std::int32_t j = 0; j < n_; ++j) {
      if (pi < pivots_.size() && pivots_[pi] == j) {
        ++pi;
        continue;
      }
      out.push_back(red[j]);
    }
    return out;
  }

 private:
  std::int32_t n_ = 0;
  K model_{};
  FMat<K> m_;  // [rows | I], reduced
  std::vector<std::int32_t> pivots_;
};

// ker(g)/im(f) over a field, with class coordinates for cycles.
template <FieldScalar K>
class SubquotientF {
 public:
  // f: C' -> C (rows = images), g: C -> C'' as matrices; dim = dim C
  SubquotientF(const FMat<K>& f, const FMat<K>& g) {
    model_ = g.model;
    n_ = g.rows;
    auto ker = left_kernel(g);
    std::vector<std::vector<K>> imgs;
    for (std::int32_t i = 0; i < f.rows; ++i) imgs.push_back(f.row_vec(i));
    im_ = RowSpace<K>(imgs, n_, model_);
    std::vector<std::vector<K>> reps;
    for (auto& v : ker) {
      std::vector<K> red = im_.reduce(v);
      bool nz = false;
      for (auto& x : red) nz |= !ring_traits<K>::is_zero(x);
      if (nz) reps.push_back(std::move(red));
    }
    reps_ = RowSpace<K>(row_basis(reps, n_, model_), n_, model_);
    dim_ = reps_.dim();
  }

  std::int32_t dim() const { return dim_; }
  std::int32_t ambient_dim() const { return n_; }

  // class coordinates of a cycle z (must satisfy z*g = 0)
  std::vector<K> class_coords(const std::vector<K>& z) const {
    auto c = reps_.coordinates_of(im_.reduce(z));
    assert(c.has_value());
    return *c;
  }

  // representative cycle of the i-th homology basis class
  std::vector<K> rep(std::int32_t i) const { return reps_.basis_row(i); }

 private:
  std::int32_t n_ = 0, dim_ = 0;
  K model_{};
  RowSpace<K> im_, reps_;
};

}  // namespace cm::exact
