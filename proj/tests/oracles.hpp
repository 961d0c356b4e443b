#pragma once

// Test-side oracles, independent of the library's computation paths.

#include <random>
#include <vector>

#include "cm/zmat.hpp"

namespace oracles {

using cm::Int;
using cm::exact::DenseZ;
using cm::exact::ZMat;

// Bareiss fraction-free determinant.
inline Int det(DenseZ m) {
  if (m.rows != m.cols) return 0;
  const int n = m.rows;
  Int sign = 1, prev = 1;
  for (int k = 0; k < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (sgn(m(i, k)) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

inline ZMat random_sparse(int rows, int cols, double density, int lo, int hi,
                          unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> val(lo, hi);
  ZMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (coin(rng) < density) {
        int v = val(rng);
        if (v != 0) m.set(i, j, v);
      }
  m.finish();
  return m;
}

// Gaussian elimination rank over Q, computed with exact rationals.
inline int rank_q(std::vector<std::vector<cm::Rat>> m) {
  if (m.empty()) return 0;
  const int rows = (int)m.size(), cols = (int)m[0].size();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (sgn(m[i][c]) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[r], m[p]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      cm::Rat f = m[i][c] / m[r][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace oracles
