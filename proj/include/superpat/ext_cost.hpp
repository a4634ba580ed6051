#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

#include "error.hpp"

namespace superpat {

// A cost in {0,1,2,...} together with a distinguished infinity. Infinity
// absorbs under addition; finite overflow throws rather than wrapping.
class ExtCost {
 public:
  constexpr ExtCost() = default;
  constexpr ExtCost(std::uint64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtCost infinity() {
    ExtCost c;
    c.infinite_ = true;
    return c;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  std::uint64_t value() const {
    if (infinite_) throw DomainError("value() of an infinite cost");
    return value_;
  }

  friend ExtCost operator+(ExtCost a, ExtCost b) {
    if (a.infinite_ || b.infinite_) return infinity();
    if (a.value_ > std::numeric_limits<std::uint64_t>::max() - b.value_)
      throw std::overflow_error("ExtCost addition overflow");
    return ExtCost(a.value_ + b.value_);
  }
  ExtCost& operator+=(ExtCost b) { return *this = *this + b; }

  friend constexpr bool operator==(ExtCost a, ExtCost b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(ExtCost a, ExtCost b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const { return infinite_ ? "inf" : std::to_string(value_); }
  friend std::ostream& operator<<(std::ostream& os, ExtCost c) { return os << c.to_string(); }

 private:
  std::uint64_t value_ = 0;
  bool infinite_ = false;
};

inline constexpr ExtCost kInfinity = ExtCost::infinity();

}  // namespace superpat
