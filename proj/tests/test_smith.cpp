#include <doctest.h>

#include "cm/smith.hpp"
#include "oracles.hpp"

using namespace cm;
using namespace cm::exact;

namespace {

bool is_diagonal_chained(const DenseZ& s, int rank) {
  for (int i = 0; i < s.rows; ++i)
    for (int j = 0; j < s.cols; ++j)
      if (i != j && sgn(s(i, j)) != 0) return false;
  for (int i = 0; i + 1 < rank; ++i)
    if (sgn(s(i + 1, i + 1) % s(i, i)) != 0) return false;
  return true;
}

void check_full(const ZMat& m) {
  SmithFull f = smith_normal_form(m);
  DenseZ prod = mul(mul(f.U, DenseZ::from_sparse(m)), f.V);
  for (int i = 0; i < prod.rows; ++i)
    for (int j = 0; j < prod.cols; ++j) CHECK(prod(i, j) == f.S(i, j));
  CHECK(is_diagonal_chained(f.S, f.rank));
  Int du = oracles::det(f.U), dv = oracles::det(f.V);
  CHECK(abs(du) == 1);
  CHECK(abs(dv) == 1);
}

}  // namespace

TEST_CASE("smith: diagonal input") {
  ZMat m(2, 2);
  m.set(0, 0, 2);
  m.finish();
  SmithFull f = smith_normal_form(m);
  CHECK(f.rank == 1);
  CHECK(f.S(0, 0) == 2);
  CHECK(f.S(1, 1) == 0);
}

TEST_CASE("smith: identity case") {
  ZMat m(1, 1);
  m.set(0, 0, 1);
  m.finish();
  SmithFull f = smith_normal_form(m);
  CHECK(f.rank == 1);
  CHECK(f.S(0, 0) == 1);
}

TEST_CASE("smith: U*m*V = S on random sparse matrices") {
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    check_full(oracles::random_sparse(20, 12, 0.25, -9, 9, seed));
    check_full(oracles::random_sparse(7, 13, 0.4, -30, 30, seed + 100));
  }
}

TEST_CASE("smith: known invariant factors") {
  // [[2,4,4],[-6,6,12],[10,4,16]] has SNF diag(2,2,156) (standard example)
  ZMat m(3, 3);
  m.set(0, 0, 2), m.set(0, 1, 4), m.set(0, 2, 4);
  m.set(1, 0, -6), m.set(1, 1, 6), m.set(1, 2, 12);
  m.set(2, 0, 10), m.set(2, 1, 4), m.set(2, 2, 16);
  m.finish();
  SmithFull f = smith_normal_form(m);
  REQUIRE(f.rank == 3);
  CHECK(f.S(0, 0) == 2);
  CHECK(f.S(1, 1) == 2);
  CHECK(f.S(2, 2) == 156);
  check_full(m);
}

TEST_CASE("collapse agrees with full smith on random presentations") {
  for (unsigned seed : {11u, 12u, 13u, 14u, 15u, 16u, 17u, 18u}) {
    ZMat m = oracles::random_sparse(14, 9, 0.3, -6, 6, seed);
    SmithFull f = smith_normal_form(m);
    std::vector<Int> expect;
    std::int64_t free_expect = m.cols - f.rank;
    for (int i = 0; i < f.rank; ++i)
      if (f.S(i, i) != 1) expect.push_back(f.S(i, i));

    Collapse c(m.cols, m.row);
    CHECK(c.free_rank() == free_expect);
    CHECK(c.invariant_factors() == expect);
  }
}

TEST_CASE("collapse: reduce is a homomorphism and kills relations") {
  ZMat m = oracles::random_sparse(10, 6, 0.4, -5, 5, 77);
  Collapse c(m.cols, m.row);
  for (auto& row : m.row) CHECK(c.is_zero_class(row));

  std::mt19937 rng(5);
  std::uniform_int_distribution<int> val(-20, 20);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Int> a(m.cols), b(m.cols), sum(m.cols);
    for (int j = 0; j < m.cols; ++j) {
      a[j] = val(rng);
      b[j] = val(rng);
      sum[j] = a[j] + b[j];
    }
    std::vector<Int> ra = c.reduce(a), rb = c.reduce(b), rs = c.reduce(sum);
    std::vector<Int> manual(ra.size());
    for (std::size_t k = 0; k < ra.size(); ++k) manual[k] = ra[k] + rb[k];
    // normalize mod the coordinate moduli
    for (std::size_t k = 0; k < ra.size(); ++k)
      if (sgn(c.coord_mods()[k]) != 0)
        mpz_fdiv_r(manual[k].get_mpz_t(), manual[k].get_mpz_t(),
                   c.coord_mods()[k].get_mpz_t());
    CHECK(manual == rs);
  }
}

TEST_CASE("collapse: generator expressions reduce to unit vectors") {
  for (unsigned seed : {21u, 22u, 23u}) {
    ZMat m = oracles::random_sparse(12, 8, 0.35, -4, 4, seed);
    Collapse c(m.cols, m.row);
    for (int k = 0; k < c.canonical_size(); ++k) {
      std::vector<Int> e = c.reduce(c.generator_expression(k));
      for (int j = 0; j < c.canonical_size(); ++j) {
        Int want = (j == k) ? 1 : 0;
        if (j == k && sgn(c.coord_mods()[k]) != 0 && c.coord_mods()[k] == 1)
          want = 0;
        CHECK(e[j] == want);
      }
    }
  }
}

TEST_CASE("collapse: redundant presentations hit the absorption path") {
  for (unsigned seed : {41u, 42u, 43u}) {
    ZMat m = oracles::random_sparse(12, 7, 0.35, -5, 5, seed);
    SmithFull f = smith_normal_form(m);
    std::vector<Int> expect;
    for (int i = 0; i < f.rank; ++i)
      if (f.S(i, i) != 1) expect.push_back(f.S(i, i));

    // pile on combinations of existing rows so rows >> cols
    std::vector<SVec> rows = m.row;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, m.rows - 1), val(-3, 3);
    for (int extra = 0; extra < 300; ++extra) {
      SVec combo;
      for (int parts = 0; parts < 3; ++parts)
        svec_axpy(combo, val(rng), m.row[pick(rng)]);
      rows.push_back(combo);
    }
    Collapse c(m.cols, rows);
    CHECK(c.free_rank() == m.cols - f.rank);
    CHECK(c.invariant_factors() == expect);
    for (auto& r : rows) CHECK(c.is_zero_class(r));
  }
}

TEST_CASE("collapse handles a unit-free residual") {
  // all entries even: no +-1 pivots anywhere, exercises the dense finish
  ZMat m(3, 3);
  m.set(0, 0, 2), m.set(0, 1, 4);
  m.set(1, 1, 6), m.set(1, 2, 2);
  m.set(2, 0, 4), m.set(2, 2, 8);
  m.finish();
  SmithFull f = smith_normal_form(m);
  std::vector<Int> expect;
  for (int i = 0; i < f.rank; ++i)
    if (f.S(i, i) != 1) expect.push_back(f.S(i, i));
  Collapse c(m.cols, m.row);
  CHECK(c.invariant_factors() == expect);
  CHECK(c.free_rank() == m.cols - f.rank);
}

TEST_CASE("left_kernel and solve_left") {
  ZMat m = oracles::random_sparse(9, 5, 0.45, -7, 7, 31);
  auto ker = left_kernel(m);
  for (auto& x : ker) {
    std::vector<Int> prod(m.cols);
    for (int i = 0; i < m.rows; ++i)
      if (sgn(x[i]) != 0)
        for (auto& [j, v] : m.row[i]) prod[j] += x[i] * v;
    for (auto& v : prod) CHECK(sgn(v) == 0);
  }

  SmithFull f = smith_normal_form(m);
  // b = combination of rows must be solvable; reconstruct and verify
  std::vector<Int> z{1, -2, 3, 0, 0, 1, 0, -1, 2};
  std::vector<Int> b(m.cols);
  for (int i = 0; i < m.rows; ++i)
    if (sgn(z[i]) != 0)
      for (auto& [j, v] : m.row[i]) b[j] += z[i] * v;
  auto sol = solve_left(f, b);
  REQUIRE(sol.has_value());
  std::vector<Int> prod(m.cols);
  for (int i = 0; i < m.rows; ++i)
    if (sgn((*sol)[i]) != 0)
      for (auto& [j, v] : m.row[i]) prod[j] += (*sol)[i] * v;
  CHECK(prod == b);
}

TEST_CASE("smith: capacity limit") {
  ZMat big(4000, 4000);
  CHECK_THROWS_AS((void)smith_normal_form(big), capacity_error);
}
