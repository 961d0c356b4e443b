#include "cm/smith.hpp"

#include <cassert>
#include <queue>
#include <tuple>

namespace cm::exact {

namespace {

// quotient minimizing |a - q*b|
Int div_round(const Int& a, const Int& b) {
  Int q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int r2 = 2 * abs(r);
  if (r2 > abs(b)) q += (sgn(r) == sgn(b)) ? 1 : -1;
  return q;
}

}  // namespace

std::vector<Int> chain_invariant_factors(std::vector<Int> diag) {
  std::erase_if(diag, [](const Int& d) { return sgn(d) == 0; });
  for (auto& d : diag) d = abs(d);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < diag.size(); ++i)
      for (std::size_t j = i + 1; j < diag.size(); ++j) {
        Int g = gcd(diag[i], diag[j]);
        if (g != diag[i]) {
          Int l = diag[i] / g * diag[j];
          diag[i] = g;
          diag[j] = l;
          changed = true;
        }
      }
  }
  std::sort(diag.begin(), diag.end());
  std::erase_if(diag, [](const Int& d) { return d == 1; });
  return diag;
}

SmithFull smith_normal_form(const ZMat& m) {
  capacity::check_entries((std::int64_t)m.rows * m.cols, "smith_normal_form");
  return smith_normal_form(DenseZ::from_sparse(m));
}

SmithFull smith_normal_form(DenseZ m) {
  const std::int32_t R = m.rows, C = m.cols;
  SmithFull out;
  out.U = DenseZ::identity(R);
  out.V = DenseZ::identity(C);
  out.Vinv = DenseZ::identity(C);

  auto row_sub = [&](std::int32_t dst, std::int32_t src, const Int& q) {
    if (sgn(q) == 0) return;
    for (std::int32_t j = 0; j < C; ++j) m(dst, j) -= q * m(src, j);
    for (std::int32_t j = 0; j < R; ++j) out.U(dst, j) -= q * out.U(src, j);
  };
  auto col_sub = [&](std::int32_t dst, std::int32_t src, const Int& q) {
    if (sgn(q) == 0) return;
    for (std::int32_t i = 0; i < R; ++i) m(i, dst) -= q * m(i, src);
    for (std::int32_t i = 0; i < C; ++i) out.V(i, dst) -= q * out.V(i, src);
    for (std::int32_t j = 0; j < C; ++j)
      out.Vinv(src, j) += q * out.Vinv(dst, j);
  };
  auto row_swap = [&](std::int32_t a, std::int32_t b) {
    if (a == b) return;
    for (std::int32_t j = 0; j < C; ++j) swap(m(a, j), m(b, j));
    for (std::int32_t j = 0; j < R; ++j) swap(out.U(a, j), out.U(b, j));
  };
  auto col_swap = [&](std::int32_t a, std::int32_t b) {
    if (a == b) return;
    for (std::int32_t i = 0; i < R; ++i) swap(m(i, a), m(i, b));
    for (std::int32_t i = 0; i < C; ++i) swap(out.V(i, a), out.V(i, b));
    for (std::int32_t j = 0; j < C; ++j) swap(out.Vinv(a, j), out.Vinv(b, j));
  };
  auto row_negate = [&](std::int32_t i) {
    for (std::int32_t j = 0; j < C; ++j) m(i, j) = -m(i, j);
    for (std::int32_t j = 0; j < R; ++j) out.U(i, j) = -out.U(i, j);
  };

  // one-shot Bezout transform on two rows: pivot (t,t) becomes gcd, (i,t)
  // becomes zero; unimodular since x*(a/g) + y*(b/g) = 1
  auto bezout_rows = [&](std::int32_t t, std::int32_t i) {
    Int a = m(t, t), b = m(i, t), g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(),
               b.get_mpz_t());
    Int ag = a / g, bg = b / g;
    for (std::int32_t j = 0; j < C; ++j) {
      Int mt = m(t, j), mi = m(i, j);
      m(t, j) = x * mt + y * mi;
      m(i, j) = -bg * mt + ag * mi;
    }
    for (std::int32_t j = 0; j < R; ++j) {
      Int ut = out.U(t, j), ui = out.U(i, j);
      out.U(t, j) = x * ut + y * ui;
      out.U(i, j) = -bg * ut + ag * ui;
    }
  };
  auto bezout_cols = [&](std::int32_t t, std::int32_t j) {
    Int a = m(t, t), b = m(t, j), g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(),
               b.get_mpz_t());
    Int ag = a / g, bg = b / g;
    for (std::int32_t i = 0; i < R; ++i) {
      Int mt = m(i, t), mj = m(i, j);
      m(i, t) = x * mt + y * mj;
      m(i, j) = -bg * mt + ag * mj;
    }
    for (std::int32_t i = 0; i < C; ++i) {
      Int vt = out.V(i, t), vj = out.V(i, j);
      out.V(i, t) = x * vt + y * vj;
      out.V(i, j) = -bg * vt + ag * vj;
    }
    // inverse of [[x, -b/g], [y, a/g]] acting on the right is applied to
    // Vinv rows from the left: rows t, j get [[a/g, b/g], [-y, x]]
    for (std::int32_t k = 0; k < C; ++k) {
      Int wt = out.Vinv(t, k), wj = out.Vinv(j, k);
      out.Vinv(t, k) = ag * wt + bg * wj;
      out.Vinv(j, k) = -y * wt + x * wj;
    }
  };

  auto settle = [&](std::int32_t t) {
    for (;;) {
      bool dirty = false;
      for (std::int32_t i = t + 1; i < R; ++i) {
        if (sgn(m(i, t)) == 0) continue;
        if (sgn(m(i, t) % m(t, t)) == 0) {
          row_sub(i, t, m(i, t) / m(t, t));
        } else {
          bezout_rows(t, i);
          dirty = true;
        }
      }
      for (std::int32_t j = t + 1; j < C; ++j) {
        if (sgn(m(t, j)) == 0) continue;
        if (sgn(m(t, j) % m(t, t)) == 0) {
          col_sub(j, t, m(t, j) / m(t, t));
        } else {
          bezout_cols(t, j);
          dirty = true;
        }
      }
      if (!dirty) return;
    }
  };

  std::int32_t t = 0;
  while (t < R && t < C) {
    std::int32_t pi = -1, pj = -1;
    for (std::int32_t i = t; i < R; ++i)
      for (std::int32_t j = t; j < C; ++j)
        if (sgn(m(i, j)) != 0 &&
            (pi < 0 || abs(m(i, j)) < abs(m(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);
    settle(t);
    ++t;
  }
  out.rank = t;

  // chain the diagonal: fold the offending row in and re-settle; entries
  // stay within the pairwise lcm
  for (std::int32_t i = 0; i < out.rank; ++i) {
    for (;;) {
      std::int32_t bad = -1;
      for (std::int32_t j = i + 1; j < out.rank; ++j)
        if (sgn(m(j, j) % m(i, i)) != 0) {
          bad = j;
          break;
        }
      if (bad < 0) break;
      row_sub(i, bad, Int(-1));
      settle(i);
    }
    if (sgn(m(i, i)) < 0) row_negate(i);
  }

  out.S = std::move(m);
  return out;
}

std::vector<std::vector<Int>> left_kernel(const ZMat& A) {
  SmithFull f = smith_normal_form(A);
  std::vector<std::vector<Int>> basis;
  for (std::int32_t i = f.rank; i < A.rows; ++i) {
    std::vector<Int> row(A.rows);
    for (std::int32_t j = 0; j < A.rows; ++j) row[j] = f.U(i, j);
    basis.push_back(std::move(row));
  }
  return basis;
}

std::optional<std::vector<Int>> solve_left(const SmithFull& f,
                                           const std::vector<Int>& b) {
  const std::int32_t R = f.U.rows, C = f.V.rows;
  assert((std::int32_t)b.size() == C);
  std::vector<Int> bv(C);
  for (std::int32_t j = 0; j < C; ++j)
    for (std::int32_t i = 0; i < C; ++i)
      if (sgn(b[i]) != 0) bv[j] += b[i] * f.V(i, j);
  std::vector<Int> w(R);
  for (std::int32_t i = 0; i < C; ++i) {
    if (i < f.rank) {
      if (i < R && sgn(bv[i] % f.S(i, i)) == 0) {
        w[i] = bv[i] / f.S(i, i);
      } else {
        return std::nullopt;
      }
    } else if (sgn(bv[i]) != 0) {
      return std::nullopt;
    }
  }
  std::vector<Int> z(R);
  for (std::int32_t j = 0; j < R; ++j)
    for (std::int32_t i = 0; i < R; ++i)
      if (sgn(w[i]) != 0) z[j] += w[i] * f.U(i, j);
  return z;
}

// ---------------------------------------------------------------------------
// Collapse

namespace {

struct Cand {
  std::int64_t cost;
  std::int32_t row, col;
  bool operator>(const Cand& o) const {
    return std::tie(cost, col, row) > std::tie(o.cost, o.col, o.row);
  }
};

}  // namespace

Collapse::Collapse(std::int32_t n_cols, std::vector<SVec> relation_rows)
    : n_cols_(n_cols) {
  std::int64_t nnz = 0;
  for (auto& r : relation_rows) nnz += (std::int64_t)r.size();
  capacity::check_entries(nnz, "presentation collapse");
  run(std::move(relation_rows));
}

namespace {

// Incremental sparse echelon absorption: maintains at most one basis row per
// leading column and folds every incoming row in by euclidean row
// operations.  Highly redundant presentations shrink to <= n_cols rows while
// the spanned row lattice stays exactly the same.
std::vector<SVec> absorb_rows(std::int32_t n_cols, std::vector<SVec> rows) {
  std::vector<SVec> basis;
  std::vector<std::int32_t> lead_row(n_cols, -1);

  for (SVec& r : rows) {
    for (;;) {
      if (r.empty()) break;
      const std::int32_t c = r.front().first;
      if (lead_row[c] < 0) {
        lead_row[c] = (std::int32_t)basis.size();
        basis.push_back(std::move(r));
        break;
      }
      SVec& b = basis[lead_row[c]];
      const Int& ab = b.front().second;
      const Int& ar = r.front().second;
      if (sgn(ar % ab) == 0) {
        svec_axpy(r, -(ar / ab), b);
      } else {
        Int g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(),
                   ab.get_mpz_t(), ar.get_mpz_t());
        // [[x, y], [-ar/g, ab/g]] has determinant 1
        SVec nb;
        svec_axpy(nb, x, b);
        svec_axpy(nb, y, r);
        SVec nr;
        svec_axpy(nr, ab / g, r);
        svec_axpy(nr, -(ar / g), b);
        b = std::move(nb);
        r = std::move(nr);
      }
    }
  }
  return basis;
}

}  // namespace

void Collapse::run(std::vector<SVec> rows) {
  for (auto& r : rows) svec_normalize(r);
  std::erase_if(rows, [](const SVec& r) { return r.empty(); });
  if ((std::int64_t)rows.size() > 2 * (std::int64_t)n_cols_)
    rows = absorb_rows(n_cols_, std::move(rows));

  const std::int32_t R = (std::int32_t)rows.size();
  std::vector<char> row_alive(R, 1), col_alive(n_cols_, 1);
  std::vector<std::vector<std::int32_t>> col_rows(n_cols_);  // stale entries ok
  std::vector<std::int32_t> col_nnz(n_cols_, 0);

  for (std::int32_t i = 0; i < R; ++i)
    for (auto& [j, v] : rows[i]) {
      col_rows[j].push_back(i);
      ++col_nnz[j];
    }

  std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> heap;
  auto row_cost = [&](std::int32_t i, std::int32_t j) {
    return (std::int64_t)(rows[i].size() - 1) * (col_nnz[j] - 1);
  };
  auto push_best = [&](std::int32_t i) {
    if (!row_alive[i]) return;
    std::int64_t best = -1;
    std::int32_t bcol = -1;
    for (auto& [j, v] : rows[i])
      if (ring_traits<Int>::is_unit(v)) {
        std::int64_t c = row_cost(i, j);
        if (bcol < 0 || c < best || (c == best && j < bcol)) {
          best = c;
          bcol = j;
        }
      }
    if (bcol >= 0) heap.push({best, i, bcol});
  };
  for (std::int32_t i = 0; i < R; ++i) push_best(i);

  // row[dst] -= q * row[src], keeping column structures exact
  auto row_axpy = [&](std::int32_t dst, std::int32_t src, const Int& q) {
    SVec old = rows[dst];
    svec_axpy(rows[dst], -q, rows[src]);
    auto a = old.begin();
    auto b = rows[dst].begin();
    while (a != old.end() || b != rows[dst].end()) {
      if (b == rows[dst].end() || (a != old.end() && a->first < b->first)) {
        --col_nnz[a->first];
        ++a;
      } else if (a == old.end() || b->first < a->first) {
        ++col_nnz[b->first];
        col_rows[b->first].push_back(dst);
        ++b;
      } else {
        ++a, ++b;
      }
    }
  };

  auto retire_unit_pivot = [&](std::int32_t i, std::int32_t j, const Int& v) {
    // column j holds only the pivot; clear the pivot row with logged col ops
    for (auto& [k, a] : rows[i])
      if (k != j) {
        log_.push_back({j, k, -(a * v)});  // v in {1,-1}: v^{-1} = v
        --col_nnz[k];
      }
    row_alive[i] = 0;
    col_alive[j] = 0;
    col_nnz[j] = 0;
    rows[i].clear();
  };

  while (!heap.empty()) {
    Cand c = heap.top();
    heap.pop();
    if (!row_alive[c.row] || !col_alive[c.col]) {
      push_best(c.row);
      continue;
    }
    const Int* pv = svec_get(rows[c.row], c.col);
    if (!pv || !ring_traits<Int>::is_unit(*pv)) {
      push_best(c.row);
      continue;
    }
    std::int64_t cur = row_cost(c.row, c.col);
    if (cur > c.cost) {
      heap.push({cur, c.row, c.col});
      continue;
    }
    const Int v = *pv;
    std::vector<std::int32_t> touched;
    for (std::int32_t r : col_rows[c.col]) {
      if (r == c.row || !row_alive[r]) continue;
      const Int* pa = svec_get(rows[r], c.col);
      if (!pa) continue;
      row_axpy(r, c.row, *pa * v);
      if (rows[r].empty())
        row_alive[r] = 0;
      else
        touched.push_back(r);
    }
    col_rows[c.col].clear();
    col_nnz[c.col] = 1;
    retire_unit_pivot(c.row, c.col, v);
    for (std::int32_t r : touched) push_best(r);
  }

  // residual: no +-1 entries left anywhere
  std::vector<std::int32_t> act_rows;
  for (std::int32_t i = 0; i < R; ++i)
    if (row_alive[i] && !rows[i].empty()) act_rows.push_back(i);
  for (std::int32_t j = 0; j < n_cols_; ++j)
    if (col_alive[j]) finish_cols_.push_back(j);

  // sparse gcd phase, only when the residual is too big to densify
  while ((std::int64_t)act_rows.size() * (std::int64_t)finish_cols_.size() >
         250'000) {
    std::int32_t bj = -1;
    for (std::int32_t j : finish_cols_)
      if (col_nnz[j] > 0 && (bj < 0 || col_nnz[j] < col_nnz[bj])) bj = j;
    if (bj < 0) break;  // all remaining columns free
    for (;;) {
      std::int32_t bi = -1;
      Int bv;
      for (std::int32_t r : col_rows[bj]) {
        if (!row_alive[r]) continue;
        const Int* pa = svec_get(rows[r], bj);
        if (!pa) continue;
        if (bi < 0 || abs(*pa) < abs(bv)) {
          bi = r;
          bv = *pa;
        }
      }
      if (bi < 0) break;
      bool single = true;
      for (std::int32_t r : std::vector<std::int32_t>(col_rows[bj])) {
        if (r == bi || !row_alive[r]) continue;
        const Int* pa = svec_get(rows[r], bj);
        if (!pa) continue;
        row_axpy(r, bi, div_round(*pa, bv));
        if (svec_get(rows[r], bj)) single = false;
        if (rows[r].empty()) row_alive[r] = 0;
      }
      if (!single) continue;
      std::int32_t fold = -1;
      for (auto& [k, a] : rows[bi])
        if (k != bj && sgn(a % bv) != 0) {
          fold = k;
          break;
        }
      if (fold < 0) {
        for (auto& [k, a] : rows[bi])
          if (k != bj) {
            log_.push_back({bj, k, -(a / bv)});
            --col_nnz[k];
          }
        Int d = abs(bv);
        if (d != 1) retired_.emplace_back(bj, d);
        row_alive[bi] = 0;
        col_alive[bj] = 0;
        col_nnz[bj] = 0;
        rows[bi].clear();
        break;
      }
      log_.push_back({fold, bj, 1});  // C_bj += C_fold
      for (std::int32_t r : std::vector<std::int32_t>(col_rows[fold])) {
        if (!row_alive[r]) continue;
        const Int* pa = svec_get(rows[r], fold);
        if (!pa) continue;
        SVec one{{bj, *pa}};
        bool had = svec_get(rows[r], bj) != nullptr;
        svec_axpy(rows[r], Int(1), one);
        bool has = svec_get(rows[r], bj) != nullptr;
        if (!had && has) {
          ++col_nnz[bj];
          col_rows[bj].push_back(r);
        } else if (had && !has) {
          --col_nnz[bj];
        }
      }
    }
    act_rows.clear();
    finish_cols_.clear();
    for (std::int32_t i = 0; i < R; ++i)
      if (row_alive[i] && !rows[i].empty()) act_rows.push_back(i);
    for (std::int32_t j = 0; j < n_cols_; ++j)
      if (col_alive[j]) finish_cols_.push_back(j);
  }

  std::sort(retired_.begin(), retired_.end());

  // dense finish via the full Smith routine
  {
    const std::int32_t dr = (std::int32_t)act_rows.size();
    const std::int32_t dc = (std::int32_t)finish_cols_.size();
    DenseZ D(dr, dc);
    for (std::int32_t ii = 0; ii < dr; ++ii)
      for (auto& [j, v] : rows[act_rows[ii]]) {
        auto it =
            std::lower_bound(finish_cols_.begin(), finish_cols_.end(), j);
        D(ii, (std::int32_t)(it - finish_cols_.begin())) = v;
      }
    finish_ = smith_normal_form(std::move(D));
    for (std::int32_t i = 0; i < dc; ++i) {
      Int d = (i < finish_.rank) ? finish_.S(i, i) : Int(0);
      if (d == 1) continue;
      finish_kept_.push_back(i);
    }
  }

  for (auto& [col, d] : retired_) mods_.push_back(d);
  std::vector<Int> tors;
  for (auto& [col, d] : retired_) tors.push_back(d);
  for (std::int32_t i : finish_kept_) {
    Int d = (i < finish_.rank) ? finish_.S(i, i) : Int(0);
    mods_.push_back(d);
    if (sgn(d) != 0) tors.push_back(d);
  }
  factors_ = chain_invariant_factors(std::move(tors));
}

std::int64_t Collapse::free_rank() const {
  std::int64_t n = 0;
  for (auto& m : mods_)
    if (sgn(m) == 0) ++n;
  return n;
}

std::vector<Int> Collapse::reduce(const std::vector<Int>& x) const {
  assert((std::int32_t)x.size() == n_cols_);
  std::vector<Int> full = x;
  for (const ColOp& op : log_)
    if (sgn(full[op.src]) != 0) full[op.dst] += op.c * full[op.src];

  std::vector<Int> out;
  out.reserve(mods_.size());
  for (auto& [col, d] : retired_) {
    Int v;
    mpz_fdiv_r(v.get_mpz_t(), full[col].get_mpz_t(), d.get_mpz_t());
    out.push_back(std::move(v));
  }
  // finish block: y = x_active * V
  const std::int32_t dc = (std::int32_t)finish_cols_.size();
  for (std::int32_t k : finish_kept_) {
    Int y = 0;
    for (std::int32_t i = 0; i < dc; ++i)
      if (sgn(full[finish_cols_[i]]) != 0)
        y += full[finish_cols_[i]] * finish_.V(i, k);
    if (k < finish_.rank)
      mpz_fdiv_r(y.get_mpz_t(), y.get_mpz_t(), finish_.S(k, k).get_mpz_t());
    out.push_back(std::move(y));
  }
  return out;
}

std::vector<Int> Collapse::reduce(const SVec& x) const {
  std::vector<Int> d(n_cols_);
  for (auto& [j, v] : x) d[j] += v;
  return reduce(d);
}

bool Collapse::is_zero_class(const SVec& x) const {
  for (const Int& v : reduce(x))
    if (sgn(v) != 0) return false;
  return true;
}

std::vector<Int> Collapse::generator_expression(std::int32_t k) const {
  std::vector<Int> x(n_cols_);
  if (k < (std::int32_t)retired_.size()) {
    x[retired_[k].first] = 1;
  } else {
    // finish coordinate: x_active = e_k * Vinv, scattered to original ids
    std::int32_t fk = finish_kept_[k - (std::int32_t)retired_.size()];
    for (std::int32_t i = 0; i < (std::int32_t)finish_cols_.size(); ++i)
      x[finish_cols_[i]] = finish_.Vinv(fk, i);
  }
  for (auto it = log_.rbegin(); it != log_.rend(); ++it)
    if (sgn(x[it->src]) != 0) x[it->dst] -= it->c * x[it->src];
  return x;
}

}  // namespace cm::exact
