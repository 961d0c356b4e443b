#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cm/capacity.hpp"
#include "cm/scalars.hpp"

namespace cm::exact {

// Sparse row: sorted by column index, no explicit zeros.
using SVec = std::vector<std::pair<std::int32_t, Int>>;

inline void svec_normalize(SVec& v) {
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SVec out;
  out.reserve(v.size());
  for (auto& [i, c] : v) {
    if (!out.empty() && out.back().first == i)
      out.back().second += c;
    else
      out.emplace_back(i, c);
  }
  std::erase_if(out, [](const auto& e) { return sgn(e.second) == 0; });
  v = std::move(out);
}

// y += c * x, both sorted.
inline void svec_axpy(SVec& y, const Int& c, const SVec& x) {
  if (sgn(c) == 0 || x.empty()) return;
  SVec out;
  out.reserve(y.size() + x.size());
  auto a = y.begin();
  auto b = x.begin();
  while (a != y.end() || b != x.end()) {
    if (b == x.end() || (a != y.end() && a->first < b->first)) {
      out.push_back(*a++);
    } else if (a == y.end() || b->first < a->first) {
      Int v = c * b->second;
      if (sgn(v) != 0) out.emplace_back(b->first, std::move(v));
      ++b;
    } else {
      Int v = a->second + c * b->second;
      if (sgn(v) != 0) out.emplace_back(a->first, std::move(v));
      ++a, ++b;
    }
  }
  y = std::move(out);
}

inline const Int* svec_get(const SVec& v, std::int32_t col) {
  auto it = std::lower_bound(
      v.begin(), v.end(), col,
      [](const auto& e, std::int32_t c) { return e.first < c; });
  return (it != v.end() && it->first == col) ? &it->second : nullptr;
}

// Sparse integer matrix, row-major triplet lists.
struct ZMat {
  std::int32_t rows = 0, cols = 0;
  std::vector<SVec> row;

  ZMat() = default;
  ZMat(std::int32_t r, std::int32_t c) : rows(r), cols(c), row(r) {}

  void set(std::int32_t i, std::int32_t j, Int v) {
    if (sgn(v) == 0) return;
    row[i].emplace_back(j, std::move(v));
  }
  void finish() {
    for (auto& r : row) svec_normalize(r);
  }
  Int at(std::int32_t i, std::int32_t j) const {
    const Int* p = svec_get(row[i], j);
    return p ? *p : Int(0);
  }
  std::int64_t nnz() const {
    std::int64_t n = 0;
    for (auto& r : row) n += (std::int64_t)r.size();
    return n;
  }
};

// Dense integer matrix, used below the sparse threshold and for the
// unimodular transforms of the full Smith decomposition.
struct DenseZ {
  std::int32_t rows = 0, cols = 0;
  std::vector<Int> a;

  DenseZ() = default;
  DenseZ(std::int32_t r, std::int32_t c) : rows(r), cols(c), a((std::size_t)r * c) {}

  Int& operator()(std::int32_t i, std::int32_t j) { return a[(std::size_t)i * cols + j]; }
  const Int& operator()(std::int32_t i, std::int32_t j) const {
    return a[(std::size_t)i * cols + j];
  }

  static DenseZ identity(std::int32_t n) {
    DenseZ m(n, n);
    for (std::int32_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  ZMat to_sparse() const {
    ZMat m(rows, cols);
    for (std::int32_t i = 0; i < rows; ++i)
      for (std::int32_t j = 0; j < cols; ++j)
        if (sgn((*this)(i, j)) != 0) m.set(i, j, (*this)(i, j));
    m.finish();
    return m;
  }
  static DenseZ from_sparse(const ZMat& m) {
    DenseZ d(m.rows, m.cols);
    for (std::int32_t i = 0; i < m.rows; ++i)
      for (auto& [j, v] : m.row[i]) d(i, j) = v;
    return d;
  }
};

inline DenseZ mul(const DenseZ& x, const DenseZ& y) {
  DenseZ z(x.rows, y.cols);
  for (std::int32_t i = 0; i < x.rows; ++i)
    for (std::int32_t k = 0; k < x.cols; ++k) {
      const Int& v = x(i, k);
      if (sgn(v) == 0) continue;
      for (std::int32_t j = 0; j < y.cols; ++j)
        if (sgn(y(k, j)) != 0) z(i, j) += v * y(k, j);
    }
  return z;
}

}  // namespace cm::exact
