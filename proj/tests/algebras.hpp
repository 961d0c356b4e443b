#pragma once

// Shared test algebras.

#include "cm/algebra.hpp"

namespace testalg {

using cm::Coefficients;
using cm::Fp;
using cm::Rat;
using cm::alg::FinAlgebra;
using cm::alg::SplitNilpotentPair;

inline FinAlgebra<Rat> q_dual() {
  return cm::alg::truncated_polynomial<Rat>(Coefficients::rationals(),
                                            {{"e", 2}}, Rat(0));
}

inline FinAlgebra<Rat> q_eps3() {
  return cm::alg::truncated_polynomial<Rat>(Coefficients::rationals(),
                                            {{"e", 3}}, Rat(0));
}

inline FinAlgebra<Fp> fp_dual(std::int64_t p) {
  return cm::alg::truncated_polynomial<Fp>(Coefficients::prime_field(p),
                                           {{"e", 2}}, Fp::zero_of(p));
}

inline FinAlgebra<Fp> fp_eps3(std::int64_t p) {
  return cm::alg::truncated_polynomial<Fp>(Coefficients::prime_field(p),
                                           {{"e", 3}}, Fp::zero_of(p));
}

inline FinAlgebra<Fp> fp_field(std::int64_t p) {
  return FinAlgebra<Fp>(Coefficients::prime_field(p), 1, {"1"},
                        {Fp::one_of(p)}, {Fp::one_of(p)}, Fp::zero_of(p));
}

inline FinAlgebra<Rat> q_field() {
  return FinAlgebra<Rat>(Coefficients::rationals(), 1, {"1"}, {Rat(1)},
                         {Rat(1)}, Rat(0));
}

// k[x,y]/(x,y)^2, basis {1, x, y}
template <class K>
inline FinAlgebra<K> square_zero_xy(Coefficients coeffs, K model) {
  using cm::ring_traits;
  const K z = ring_traits<K>::zero(model);
  const K o = ring_traits<K>::one(model);
  std::vector<K> table(27, z);
  auto set = [&](int i, int j, int k) { table[(i * 3 + j) * 3 + k] = o; };
  set(0, 0, 0);  // 1*1 = 1
  set(0, 1, 1), set(1, 0, 1);  // 1*x = x
  set(0, 2, 2), set(2, 0, 2);  // 1*y = y
  // x^2 = xy = y^2 = 0
  return FinAlgebra<K>(coeffs, 3, {"1", "x", "y"}, {o, z, z},
                       std::move(table), model);
}

inline FinAlgebra<Rat> q_xy() {
  return square_zero_xy<Rat>(Coefficients::rationals(), Rat(0));
}

}  // namespace testalg
