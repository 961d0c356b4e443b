#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>

#include "cm/capacity.hpp"

namespace cm {

using Int = mpz_class;
using Rat = mpq_class;

inline bool is_prime_u64(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Element of a prime field F_p.  Carries its modulus; mixing moduli is a
// programming error and asserts via validation_error.
struct Fp {
  std::int64_t v = 0;  // representative in [0, p)
  std::int64_t p = 0;  // 0 marks an unset "zero of any modulus"

  Fp() = default;
  Fp(std::int64_t value, std::int64_t mod) : v(value % mod), p(mod) {
    if (v < 0) v += p;
  }

  static Fp zero_of(std::int64_t mod) { return Fp(0, mod); }
  static Fp one_of(std::int64_t mod) { return Fp(1, mod); }

  bool is_zero() const { return v == 0; }

  friend std::int64_t common_mod(const Fp& a, const Fp& b) {
    if (a.p == 0) return b.p;
    if (b.p != 0 && a.p != b.p)
      throw validation_error("Fp modulus mismatch");
    return a.p;
  }

  friend Fp operator+(const Fp& a, const Fp& b) {
    std::int64_t m = common_mod(a, b);
    if (m == 0) return Fp();
    return Fp(a.v + b.v, m);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    std::int64_t m = common_mod(a, b);
    if (m == 0) return Fp();
    return Fp(a.v - b.v, m);
  }
  friend Fp operator-(const Fp& a) { return a.p ? Fp(-a.v, a.p) : a; }
  friend Fp operator*(const Fp& a, const Fp& b) {
    std::int64_t m = common_mod(a, b);
    if (m == 0) return Fp();
    return Fp(a.v * b.v, m);
  }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }

  Fp inv() const {
    if (v == 0) throw validation_error("Fp: inverse of zero");
    // extended euclid
    std::int64_t a = v, b = p, x0 = 1, x1 = 0;
    while (b) {
      std::int64_t q = a / b;
      a -= q * b;
      std::swap(a, b);
      x0 -= q * x1;
      std::swap(x0, x1);
    }
    return Fp(x0, p);
  }

  friend bool operator==(const Fp& a, const Fp& b) {
    if (a.p == 0 || b.p == 0) return a.v == 0 && b.v == 0;
    return a.p == b.p && a.v == b.v;
  }

  friend std::ostream& operator<<(std::ostream& os, const Fp& a) {
    return os << a.v;
  }
};

// Ring traits used by the generic linear algebra.  Int is the euclidean
// lane (Smith normal form); Rat and Fp are field lanes.
template <class K>
struct ring_traits;

template <>
struct ring_traits<Int> {
  static constexpr bool is_field = false;
  static Int zero(const Int&) { return 0; }
  static Int one(const Int&) { return 1; }
  static bool is_zero(const Int& a) { return sgn(a) == 0; }
  static bool is_unit(const Int& a) { return a == 1 || a == -1; }
};

template <>
struct ring_traits<Rat> {
  static constexpr bool is_field = true;
  static Rat zero(const Rat&) { return 0; }
  static Rat one(const Rat&) { return 1; }
  static bool is_zero(const Rat& a) { return sgn(a) == 0; }
  static bool is_unit(const Rat& a) { return sgn(a) != 0; }
  static Rat inv(const Rat& a) { return Rat(1) / a; }
};

template <>
struct ring_traits<Fp> {
  static constexpr bool is_field = true;
  static Fp zero(const Fp& model) { return Fp::zero_of(model.p); }
  static Fp one(const Fp& model) { return Fp::one_of(model.p); }
  static bool is_zero(const Fp& a) { return a.is_zero(); }
  static bool is_unit(const Fp& a) { return !a.is_zero(); }
  static Fp inv(const Fp& a) { return a.inv(); }
};

template <class K>
concept FieldScalar = ring_traits<K>::is_field;

// Scalar ring descriptor: Z, Q, or F_p.
struct Coefficients {
  enum class Kind { integers, rationals, prime_field };
  Kind kind = Kind::integers;
  std::int64_t p = 0;

  static Coefficients integers() { return {Kind::integers, 0}; }
  static Coefficients rationals() { return {Kind::rationals, 0}; }
  static Coefficients prime_field(std::int64_t p) {
    if (!is_prime_u64(p)) throw validation_error("p must be prime");
    return {Kind::prime_field, p};
  }

  bool is_field() const { return kind != Kind::integers; }
  bool operator==(const Coefficients&) const = default;

  std::string to_string() const {
    switch (kind) {
      case Kind::integers: return "Z";
      case Kind::rationals: return "Q";
      default: return "F" + std::to_string(p);
    }
  }
};

}  // namespace cm
