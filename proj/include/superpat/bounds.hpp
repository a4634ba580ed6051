#pragma once

// Closed-form bounds and feasibility predicates, evaluated in natural-log
// space so that k!, C(r,k) and k^L stay finite at large k. Factorials go
// through lgamma; exact integers only appear in the oracles.

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>

#include "error.hpp"

namespace superpat {

inline constexpr int kBoundsVersion = 1;

// Relative slack for predicate comparisons, so that equal quantities reached
// through different log evaluations compare as equal.
inline constexpr double kLogTolerance = 1e-12;

// A non-negative real held as its natural log; zero is log = -inf.
struct LogValue {
  double log = 0.0;

  static LogValue zero() { return {-std::numeric_limits<double>::infinity()}; }
  static LogValue one() { return {0.0}; }
  static LogValue of(double x) {
    if (x < 0 || std::isnan(x)) throw DomainError("LogValue of a negative number");
    return {x == 0 ? -std::numeric_limits<double>::infinity() : std::log(x)};
  }

  bool is_zero() const { return std::isinf(log) && log < 0; }
  double value() const { return std::exp(log); }

  friend LogValue operator*(LogValue a, LogValue b) { return {a.log + b.log}; }
  friend LogValue operator/(LogValue a, LogValue b) { return {a.log - b.log}; }
  friend bool operator==(LogValue a, LogValue b) { return a.log == b.log; }
  friend std::partial_ordering operator<=>(LogValue a, LogValue b) { return a.log <=> b.log; }
};

inline double log_factorial(double n) { return std::lgamma(n + 1.0); }

inline double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

namespace detail {
inline bool log_less(double a, double b) { return a < b - kLogTolerance * std::max(1.0, std::abs(b)); }
inline bool log_less_equal(double a, double b) { return a <= b + kLogTolerance * std::max(1.0, std::abs(b)); }
}  // namespace detail

// log of k^L (k-L)!/k!, the inverse probability that a uniform word of length
// L over [k] is injective.
inline LogValue birthday_ratio(int k, int L) {
  if (k < 0 || L < 0 || L > k) throw DomainError("birthday_ratio needs 0 <= L <= k");
  if (L == 0) return LogValue::one();
  return {L * std::log(static_cast<double>(k)) + log_factorial(k - L) - log_factorial(k)};
}

// log of exp((alpha^2/2 + alpha^3/4) k), the birthday-problem bound on the
// ratio at L = alpha k.
inline LogValue birthday_bound(int k, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("birthday_bound needs alpha in (0,1)");
  if (k < 0) throw DomainError("birthday_bound needs k >= 0");
  return {(alpha * alpha / 2 + alpha * alpha * alpha / 4) * k};
}

// Upper bound on P(L, eps): k^L (k-L)!/k! * exp(-eps^2 L / 4).
inline LogValue forL_bound(int k, int L, double epsilon) {
  if (!(epsilon > 0)) throw DomainError("forL_bound needs eps > 0");
  const LogValue ratio = birthday_ratio(k, L);
  return {ratio.log - epsilon * epsilon * L / 4};
}

struct TheoremConstants {
  double epsilon = 0;  // 2 eps* / 3
  double alpha = 0;    // sqrt(eps^2/2 + 1) - 1
  double c0 = 0;       // eps^2 alpha / 8
};

inline TheoremConstants theorem_constants(double epsilon_star) {
  if (!(epsilon_star > 0 && epsilon_star < 0.5)) throw DomainError("theorem_constants needs eps* in (0, 1/2)");
  TheoremConstants c;
  c.epsilon = 2 * epsilon_star / 3;
  // sqrt(1+u)-1 written as u/(sqrt(1+u)+1) to keep precision for small eps.
  const double u = c.epsilon * c.epsilon / 2;
  c.alpha = u / (std::sqrt(u + 1) + 1);
  c.c0 = c.epsilon * c.epsilon * c.alpha / 8;
  return c;
}

// exp(-32 eps^2 k / 3), a tail bound for sum_j X_j <= (1/4 - eps) k^2.
inline LogValue hoeffding_x_bound(int k, double epsilon) {
  if (!(epsilon > 0)) throw DomainError("hoeffding_x_bound needs eps > 0");
  return {-32.0 * epsilon * epsilon * k / 3.0};
}

// True iff C(r,k) F < k!, certifying that no word of [r]^n is a
// k-superpattern (f(k;r) > n) when logF bounds log F(k,n) from above.
inline bool infeasibility(int k, int r, int n, LogValue logF) {
  if (k < 0 || r < 0 || n < 0) throw DomainError("infeasibility needs non-negative arguments");
  if (r < k) return true;  // no k-subset of values, nothing is contained
  return detail::log_less(log_binomial(r, k) + logF.log, log_factorial(k));
}

// Necessary condition k! <= 2n F(k,n) for a length-n word over [k] containing
// every tau in S_k as a bi-directional circular pattern.
inline bool gupta_check(int k, int n, LogValue logF) {
  if (k < 0 || n < 0) throw DomainError("gupta_check needs non-negative arguments");
  if (n == 0 || logF.is_zero()) return false;
  return detail::log_less_equal(log_factorial(k), std::log(2.0 * n) + logF.log);
}

enum class LogBase { Natural, Two, Ten };

// eps^4 > (33 + 132 log k) / k, the hypothesis giving
// f(k;k+1) < (1/2 - 3 eps/2) k^2.
inline bool loworder_predicate(double k, double epsilon, LogBase base = LogBase::Natural) {
  if (!(epsilon > 0)) throw DomainError("loworder_predicate needs eps > 0");
  if (k < 2) throw DomainError("loworder_predicate needs k >= 2");
  double lg = std::log(k);
  if (base == LogBase::Two) lg = std::log2(k);
  if (base == LogBase::Ten) lg = std::log10(k);
  const double e2 = epsilon * epsilon;
  return e2 * e2 > (33.0 + 132.0 * lg) / k;
}

struct ConConstants {
  double c_con1 = 0;      // (1/2)(eps*/M)^2
  double c_con2_sup = 0;  // any c strictly below this value
};

inline ConConstants con_constants(double epsilon_star, int M) {
  if (!(epsilon_star > 0)) throw DomainError("con_constants needs eps* > 0");
  if (M < 2) throw DomainError("con_constants needs M >= 2");
  const double r = epsilon_star / M;
  return {0.5 * r * r, 0.5 * r * r};
}

}  // namespace superpat
