#pragma once

#include <cstdint>
#include <utility>

#include <boost/math/special_functions/beta.hpp>

#include "error.hpp"

namespace superpat {

struct Interval {
  double low = 0;
  double high = 1;
};

// Exact (Clopper-Pearson) two-sided binomial interval.
inline Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence = 0.99) {
  if (trials == 0) throw DomainError("confidence interval needs at least one trial");
  if (successes > trials) throw DomainError("more successes than trials");
  const double alpha = 1.0 - confidence;
  const auto x = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  Interval ci;
  ci.low = successes == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1, alpha / 2);
  ci.high = successes == trials ? 1.0 : boost::math::ibeta_inv(x + 1, n - x, 1 - alpha / 2);
  return ci;
}

}  // namespace superpat
