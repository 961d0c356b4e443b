#include "cm/capacity.hpp"

#include <atomic>
#include <cstdlib>

namespace cm {

namespace {

std::atomic<std::int64_t>& entries_limit() {
  static std::atomic<std::int64_t> limit = [] {
    if (const char* env = std::getenv("CM_CAPACITY")) {
      char* end = nullptr;
      long long v = std::strtoll(env, &end, 10);
      if (end != env && v > 0) return v;
    }
    return 5'000'000LL;
  }();
  return limit;
}

}  // namespace

std::int64_t capacity::max_entries() { return entries_limit().load(); }
std::int64_t capacity::max_tensor_dim() { return 100'000; }
std::int64_t capacity::max_units() { return 100'000; }

void capacity::override_max_entries(std::int64_t v) { entries_limit().store(v); }

void capacity::check_entries(std::int64_t n, const char* what) {
  if (n > max_entries())
    throw capacity_error(std::string("CapacityExceeded: ") + what + " needs " +
                         std::to_string(n) + " entries, limit " +
                         std::to_string(max_entries()));
}

void capacity::check_tensor(std::int64_t n) {
  if (n > max_tensor_dim())
    throw capacity_error("CapacityExceeded: tensor space dimension " +
                         std::to_string(n) + " exceeds limit " +
                         std::to_string(max_tensor_dim()));
}

void capacity::check_units(std::int64_t n) {
  if (n > max_units())
    throw capacity_error("CapacityExceeded: unit enumeration " +
                         std::to_string(n) + " exceeds limit " +
                         std::to_string(max_units()));
}

}  // namespace cm
