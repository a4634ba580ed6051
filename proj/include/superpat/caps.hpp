#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"

namespace superpat {

// Limits on exhaustive enumeration. Every search checks the relevant cap up
// front and throws ResourceError instead of running away.
struct Caps {
  int max_perm_k = 10;                        // k! loops over S_k
  std::uint64_t max_enumeration = 10'000'000; // words / injective words visited
  int f_oracle_max_k = 4;
  int f_oracle_max_n = 12;
  int max_full_subset_k = 10;                 // materialized 2^k subset automaton
  int max_lazy_subset_k = 63;                 // bitmask-keyed states

  // Parses "key=value,key=value". Unknown keys are a DomainError.
  static Caps parse(std::string_view spec);
  static Caps parse(std::string_view spec, Caps base) {
    while (!spec.empty()) {
      auto comma = spec.find(',');
      auto item = spec.substr(0, comma);
      spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string_view::npos) throw DomainError("cap override without '=': " + std::string(item));
      auto key = item.substr(0, eq);
      auto val = item.substr(eq + 1);
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
      if (ec != std::errc{} || ptr != val.data() + val.size())
        throw DomainError("cap override is not an integer: " + std::string(item));
      if (key == "max_perm_k") base.max_perm_k = static_cast<int>(v);
      else if (key == "max_enumeration") base.max_enumeration = v;
      else if (key == "f_oracle_max_k") base.f_oracle_max_k = static_cast<int>(v);
      else if (key == "f_oracle_max_n") base.f_oracle_max_n = static_cast<int>(v);
      else if (key == "max_full_subset_k") base.max_full_subset_k = static_cast<int>(v);
      else if (key == "max_lazy_subset_k") base.max_lazy_subset_k = static_cast<int>(v);
      else throw DomainError("unknown cap: " + std::string(key));
    }
    return base;
  }
};

inline Caps Caps::parse(std::string_view spec) { return parse(spec, Caps{}); }

// Hard ceiling independent of configuration: 20! is the largest factorial in
// 64 bits and permutation masks are 32-bit.
inline constexpr int kHardPermLimit = 20;

inline void require_perm_k(int k, const Caps& caps) {
  if (k > kHardPermLimit)
    throw ResourceError("k = " + std::to_string(k) + " exceeds the hard limit " + std::to_string(kHardPermLimit));
  if (k > caps.max_perm_k)
    throw ResourceError("k = " + std::to_string(k) + " exceeds max_perm_k = " + std::to_string(caps.max_perm_k));
}

// Saturating product used to compare enumeration sizes against caps.
inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

inline std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

// k! / (k-L)!, saturating.
inline std::uint64_t falling_factorial(int k, int L) {
  std::uint64_t r = 1;
  for (int i = 0; i < L; ++i) r = saturating_mul(r, static_cast<std::uint64_t>(k - i));
  return r;
}

}  // namespace superpat
