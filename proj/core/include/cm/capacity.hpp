#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cm {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct capacity_error : error {
  using error::error;
};

struct validation_error : error {
  using error::error;
};

struct parse_error : error {
  std::size_t byte_offset = 0;
  parse_error(const std::string& msg, std::size_t off)
      : error(msg), byte_offset(off) {}
};

// Global capacity limits.  Runaway computations (tensor degrees, unit
// enumerations, presentation sizes) turn into capacity_error instead of
// exhausting memory.  CM_CAPACITY scales max_entries from the environment.
struct capacity {
  static std::int64_t max_entries();        // nonzero matrix entries
  static std::int64_t max_tensor_dim();     // dim(R)^(n+1)
  static std::int64_t max_units();          // enumerated units
  static void override_max_entries(std::int64_t v);

  static void check_entries(std::int64_t n, const char* what);
  static void check_tensor(std::int64_t n);
  static void check_units(std::int64_t n);
};

}  // namespace cm
