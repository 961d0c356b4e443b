#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <tuple>
#include <vector>

#include "cm/linalg.hpp"
#include "cm/scalars.hpp"

namespace cm::exact {

// Sparse matrix over a field, row-major, sorted columns.
template <FieldScalar K>
struct SpMat {
  std::int64_t rows = 0, cols = 0;
  std::vector<std::vector<std::pair<std::int64_t, K>>> row;
  K model{};

  SpMat() = default;
  SpMat(std::int64_t r, std::int64_t c, K m)
      : rows(r), cols(c), row((std::size_t)r), model(m) {}

  void set(std::int64_t i, std::int64_t j, K v) {
    if (!ring_traits<K>::is_zero(v)) row[i].emplace_back(j, std::move(v));
  }
  void finish() {
    for (auto& r : row) {
      std::sort(r.begin(), r.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<std::pair<std::int64_t, K>> out;
      for (auto& [j, v] : r) {
        if (!out.empty() && out.back().first == j)
          out.back().second += v;
        else
          out.emplace_back(j, v);
      }
      std::erase_if(out, [](const auto& e) {
        return ring_traits<K>::is_zero(e.second);
      });
      r = std::move(out);
    }
  }

  static SpMat identity(std::int64_t n, K m) {
    SpMat out(n, n, m);
    for (std::int64_t i = 0; i < n; ++i)
      out.row[i].emplace_back(i, ring_traits<K>::one(m));
    return out;
  }

  std::int64_t nnz() const {
    std::int64_t s = 0;
    for (auto& r : row) s += (std::int64_t)r.size();
    return s;
  }

  bool is_zero() const {
    for (auto& r : row)
      if (!r.empty()) return false;
    return true;
  }

  friend bool operator==(const SpMat& a, const SpMat& b) {
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (std::int64_t i = 0; i < a.rows; ++i) {
      auto x = a.row[i];
      auto y = b.row[i];
      if (x.size() != y.size()) return false;
      for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k].first != y[k].first ||
            !ring_traits<K>::is_zero(x[k].second - y[k].second))
          return false;
    }
    return true;
  }

  FMat<K> to_dense() const {
    FMat<K> m((std::int32_t)rows, (std::int32_t)cols, model);
    for (std::int64_t i = 0; i < rows; ++i)
      for (auto& [j, v] : row[i]) m((std::int32_t)i, (std::int32_t)j) += v;
    return m;
  }
};

template <FieldScalar K>
SpMat<K> sp_mul(const SpMat<K>& a, const SpMat<K>& b) {
  SpMat<K> c(a.rows, b.cols, a.model);
  for (std::int64_t i = 0; i < a.rows; ++i) {
    std::vector<std::pair<std::int64_t, K>> acc;
    for (auto& [k, v] : a.row[i])
      for (auto& [j, w] : b.row[k]) acc.emplace_back(j, v * w);
    std::sort(acc.begin(), acc.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    auto& out = c.row[i];
    for (auto& [j, v] : acc) {
      if (!out.empty() && out.back().first == j)
        out.back().second += v;
      else
        out.emplace_back(j, v);
    }
    std::erase_if(out, [](const auto& e) {
      return ring_traits<K>::is_zero(e.second);
    });
  }
  return c;
}

template <FieldScalar K>
SpMat<K> sp_add(const SpMat<K>& a, const SpMat<K>& b, const K& cb) {
  SpMat<K> c(a.rows, a.cols, a.model);
  for (std::int64_t i = 0; i < a.rows; ++i) {
    auto& out = c.row[i];
    auto p = a.row[i].begin();
    auto q = b.row[i].begin();
    while (p != a.row[i].end() || q != b.row[i].end()) {
      if (q == b.row[i].end() ||
          (p != a.row[i].end() && p->first < q->first)) {
        out.push_back(*p++);
      } else if (p == a.row[i].end() || q->first < p->first) {
        K v = cb * q->second;
        if (!ring_traits<K>::is_zero(v)) out.emplace_back(q->first, v);
        ++q;
      } else {
        K v = p->second + cb * q->second;
        if (!ring_traits<K>::is_zero(v)) out.emplace_back(p->first, v);
        ++p, ++q;
      }
    }
  }
  return c;
}

template <FieldScalar K>
SpMat<K> sp_scale(SpMat<K> a, const K& c) {
  for (auto& r : a.row)
    for (auto& [j, v] : r) v *= c;
  return a;
}

template <FieldScalar K>
std::vector<K> sp_apply_row(const std::vector<K>& x, const SpMat<K>& m) {
  std::vector<K> y((std::size_t)m.cols, ring_traits<K>::zero(m.model));
  for (std::int64_t i = 0; i < m.rows; ++i) {
    if (ring_traits<K>::is_zero(x[i])) continue;
    for (auto& [j, v] : m.row[i]) y[j] += x[i] * v;
  }
  return y;
}

// Rank by sparse elimination with Markowitz pivoting.  Destroys a working
// copy; intended for large, very sparse boundary matrices.
template <FieldScalar K>
std::int64_t sparse_rank(const SpMat<K>& m_in) {
  auto rows = m_in.row;
  const std::int64_t R = (std::int64_t)rows.size();
  std::vector<std::vector<std::int32_t>> col_rows((std::size_t)m_in.cols);
  std::vector<std::int32_t> col_nnz((std::size_t)m_in.cols, 0);
  std::vector<char> row_alive((std::size_t)R, 1);
  for (std::int64_t i = 0; i < R; ++i)
    for (auto& [j, v] : rows[i]) {
      col_rows[j].push_back((std::int32_t)i);
      ++col_nnz[j];
    }

  struct Cand {
    std::int64_t cost;
    std::int64_t row, col;
    bool operator>(const Cand& o) const {
      return std::tie(cost, col, row) > std::tie(o.cost, o.col, o.row);
    }
  };
  std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> heap;
  auto push_best = [&](std::int64_t i) {
    if (!row_alive[i] || rows[i].empty()) return;
    std::int64_t best = -1, bcol = -1;
    for (auto& [j, v] : rows[i]) {
      std::int64_t c = (std::int64_t)(rows[i].size() - 1) * (col_nnz[j] - 1);
      if (bcol < 0 || c < best || (c == best && j < bcol)) {
        best = c;
        bcol = j;
      }
    }
    heap.push({best, i, bcol});
  };
  for (std::int64_t i = 0; i < R; ++i) push_best(i);

  auto get = [&](std::int64_t i, std::int64_t j) -> const K* {
    auto it = std::lower_bound(
        rows[i].begin(), rows[i].end(), j,
        [](const auto& e, std::int64_t c) { return e.first < c; });
    return (it != rows[i].end() && it->first == j) ? &it->second : nullptr;
  };
  auto axpy = [&](std::int64_t dst, const K& c, std::int64_t src) {
    std::vector<std::pair<std::int64_t, K>> out;
    auto p = rows[dst].begin();
    auto q = rows[src].begin();
    while (p != rows[dst].end() || q != rows[src].end()) {
      if (q == rows[src].end() ||
          (p != rows[dst].end() && p->first < q->first)) {
        out.push_back(*p++);
      } else if (p == rows[dst].end() || q->first < p->first) {
        K v = c * q->second;
        if (!ring_traits<K>::is_zero(v)) {
          out.emplace_back(q->first, v);
          ++col_nnz[q->first];
          col_rows[q->first].push_back((std::int32_t)dst);
        }
        ++q;
      } else {
        K v = p->second + c * q->second;
        if (!ring_traits<K>::is_zero(v))
          out.emplace_back(p->first, v);
        else
          --col_nnz[p->first];
        ++p, ++q;
      }
    }
    rows[dst] = std::move(out);
  };

  std::int64_t rank = 0;
  while (!heap.empty()) {
    Cand c = heap.top();
    heap.pop();
    if (!row_alive[c.row]) continue;
    const K* pv = get(c.row, c.col);
    if (!pv) {
      push_best(c.row);
      continue;
    }
    std::int64_t cur =
        (std::int64_t)(rows[c.row].size() - 1) * (col_nnz[c.col] - 1);
    if (cur > c.cost) {
      heap.push({cur, c.row, c.col});
      continue;
    }
    K inv = ring_traits<K>::inv(*pv);
    std::vector<std::int32_t> touched;
    for (std::int32_t r : col_rows[c.col]) {
      if (r == c.row || !row_alive[r]) continue;
      const K* pa = get(r, c.col);
      if (!pa) continue;
      axpy(r, -(*pa * inv), c.row);
      if (!rows[r].empty()) touched.push_back(r);
    }
    for (auto& [j, v] : rows[c.row]) --col_nnz[j];
    col_rows[c.col].clear();
    row_alive[c.row] = 0;
    rows[c.row].clear();
    ++rank;
    for (std::int32_t r : touched) push_best(r);
  }
  return rank;
}

}  // namespace cm::exact
