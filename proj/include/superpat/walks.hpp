#pragma once

// Random permutational (injective) words and the statistics of their walk
// costs on k-DFAs: exact and Monte-Carlo evaluation of
//   P(v, L, eps) = Pr[cost(v, w) < (1/2 - eps) k L],
// the per-step split of a permutation's cost C_j = X_j + Y_j (X_j the rank of
// C_j among the costs still available, Y_j >= 0 the slack), the collision
// statistic T, and empirical frequency experiments for the concentration
// events on X and T.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "caps.hpp"
#include "dfa.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "word.hpp"

namespace superpat {

class PermutationalWord {
 public:
  PermutationalWord() = default;
  PermutationalWord(std::vector<Letter> letters, int k) : letters_(std::move(letters)), k_(k) {
    if (static_cast<int>(letters_.size()) > k_) throw DomainError("permutational word longer than k");
    std::vector<char> seen(k_ + 1, 0);
    for (Letter t : letters_) {
      if (t < 1 || t > k_) throw DomainError("letter outside [k]");
      if (seen[t]) throw DomainError("permutational word repeats letter " + std::to_string(t));
      seen[t] = 1;
    }
  }

  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  int alphabet_size() const { return k_; }

  friend bool operator==(const PermutationalWord&, const PermutationalWord&) = default;

 private:
  std::vector<Letter> letters_;
  int k_ = 0;
};

// Uniform over the k!/(k-L)! injective words of length L: the first L entries
// of a partial Fisher-Yates shuffle of [k].
template <class Rng>
PermutationalWord sample_perm_word(int k, int L, Rng& rng) {
  if (L < 0 || L > k) throw DomainError("sample_perm_word needs 0 <= L <= k");
  std::vector<Letter> pool(k);
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < L; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(k - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(L);
  return PermutationalWord(std::move(pool), k);
}

// w|_E: the letters at the 1-based positions in E, in increasing position order.
inline PermutationalWord restriction(const PermutationalWord& w, std::vector<std::size_t> positions) {
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  std::vector<Letter> out;
  out.reserve(positions.size());
  for (std::size_t e : positions) {
    if (e < 1 || e > w.size()) throw DomainError("restriction index " + std::to_string(e) + " out of range");
    out.push_back(w.letters()[e - 1]);
  }
  return PermutationalWord(std::move(out), w.alphabet_size());
}

// Strict '<' matches the definition of P; '<=' matches the (v,eps)-bad words.
enum class Comparator { Less, LessEqual };

inline std::string to_string(Comparator c) { return c == Comparator::Less ? "<" : "<="; }

// (1/2 - eps) k L. Costs are integers, so a threshold within relative 1e-9 of
// an integer is snapped to it: eps = 0.1 with kL = 10 gives exactly 4.
inline long double cost_threshold(int k, int L, double epsilon) {
  const long double t = (0.5L - static_cast<long double>(epsilon)) * k * L;
  const long double r = std::round(t);
  return std::abs(t - r) <= 1e-9L * std::max(1.0L, std::abs(t)) ? r : t;
}

inline bool below_threshold(std::uint64_t cost, long double threshold, Comparator cmp) {
  const auto c = static_cast<long double>(cost);
  return cmp == Comparator::Less ? c < threshold : c <= threshold;
}

namespace detail {

template <class A>
void check_k_dfa(const A& a, const Caps& caps) {
  if constexpr (std::is_same_v<A, SubsetDfa>) {
    (void)a;
    (void)caps;
  } else {
    require_k_dfa(a, caps);
  }
}

template <Automaton A>
std::uint64_t count_cheap_words(const A& a, typename A::state_type v, int remaining, std::uint64_t used,
                                std::uint64_t cost, long double threshold, Comparator cmp) {
  // Costs are >= 1, so once the running cost fails no extension passes.
  if (!below_threshold(cost, threshold, cmp)) return 0;
  if (remaining == 0) return 1;
  std::uint64_t n = 0;
  for (Letter t = 1; t <= a.alphabet_size(); ++t) {
    if (used >> (t - 1) & 1u) continue;
    n += count_cheap_words(a, a.next(v, t), remaining - 1, used | (std::uint64_t{1} << (t - 1)),
                           cost + a.cost(v, t).value(), threshold, cmp);
  }
  return n;
}

}  // namespace detail

struct ExactProbability {
  std::uint64_t count = 0;  // injective words below the threshold
  std::uint64_t total = 0;  // k!/(k-L)!
  double value() const { return static_cast<double>(count) / static_cast<double>(total); }
};

// Exact P(v, L, eps) by enumerating all injective words of length L.
template <EnumerableAutomaton A>
ExactProbability exact_P(const A& a, typename A::state_type v, int L, double epsilon,
                         Comparator cmp = Comparator::Less, const Caps& caps = {}) {
  const int k = a.alphabet_size();
  if (L < 0 || L > k) throw DomainError("exact_P needs 0 <= L <= k");
  if (!a.contains_state(v)) throw DomainError("unknown state");
  if (k > 64) throw ResourceError("exact_P supports k <= 64");
  const std::uint64_t total = falling_factorial(k, L);
  if (total > caps.max_enumeration)
    throw ResourceError("exact_P would enumerate " + std::to_string(total) + " words (max_enumeration = " +
                        std::to_string(caps.max_enumeration) + ")");
  detail::check_k_dfa(a, caps);
  return {detail::count_cheap_words(a, v, L, 0, 0, cost_threshold(k, L, epsilon), cmp), total};
}

// max over states v of P(v, L, eps), and a maximizing state.
template <EnumerableAutomaton A>
std::pair<ExactProbability, typename A::state_type> exact_P_max(const A& a, int L, double epsilon,
                                                                Comparator cmp = Comparator::Less,
                                                                const Caps& caps = {}) {
  detail::check_k_dfa(a, caps);
  const int k = a.alphabet_size();
  if (L < 0 || L > k) throw DomainError("exact_P needs 0 <= L <= k");
  const std::uint64_t total = falling_factorial(k, L);
  if (saturating_mul(total, a.state_count()) > caps.max_enumeration)
    throw ResourceError("exact_P over all states exceeds max_enumeration");
  const long double thr = cost_threshold(k, L, epsilon);
  ExactProbability best{0, total};
  auto arg = a.state_at(0);
  for (std::uint64_t i = 0; i < a.state_count(); ++i) {
    const auto v = a.state_at(i);
    const std::uint64_t c = detail::count_cheap_words(a, v, L, 0, 0, thr, cmp);
    if (c > best.count) {
      best.count = c;
      arg = v;
    }
  }
  return {best, arg};
}

struct EstimateReport {
  double estimate = 0;
  double ci_low = 0;
  double ci_high = 1;
  std::uint64_t successes = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double threshold = 0;
  Comparator comparator = Comparator::Less;
  int k = 0;
  int L = 0;
  double epsilon = 0;
};

// Monte-Carlo P(v, L, eps) with a 99% Clopper-Pearson interval. Sample i uses
// KeyedRng(seed, i), so the report does not depend on `threads`.
template <Automaton A>
EstimateReport estimate_P(const A& a, typename A::state_type v, int L, double epsilon, std::uint64_t samples,
                          std::uint64_t seed, Comparator cmp = Comparator::Less, unsigned threads = 1,
                          const Caps& caps = {}) {
  const int k = a.alphabet_size();
  if (samples == 0) throw DomainError("estimate_P needs samples > 0");
  if (L < 0 || L > k) throw DomainError("estimate_P needs 0 <= L <= k");
  if (!a.contains_state(v)) throw DomainError("unknown state");
  if constexpr (EnumerableAutomaton<A>) detail::check_k_dfa(a, caps);
  const long double thr = cost_threshold(k, L, epsilon);
  const std::uint64_t hits = parallel_reduce<std::uint64_t>(samples, threads, [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t h = 0;
    for (auto i = b; i < e; ++i) {
      KeyedRng rng(seed, i);
      const auto w = sample_perm_word(k, L, rng);
      const auto trace = walk_cost(a, v, w.letters());
      if (trace.total.is_finite() && below_threshold(trace.total.value(), thr, cmp)) ++h;
    }
    return h;
  });
  EstimateReport r;
  r.successes = hits;
  r.samples = samples;
  r.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  const Interval ci = clopper_pearson(hits, samples, 0.99);
  r.ci_low = std::min(ci.low, r.estimate);
  r.ci_high = std::max(ci.high, r.estimate);
  r.seed = seed;
  r.threshold = static_cast<double>(thr);
  r.comparator = cmp;
  r.k = k;
  r.L = L;
  r.epsilon = epsilon;
  return r;
}

// ---------------------------------------------------------------------------
// Cost split along the root walk of a permutation.

struct Decomposition {
  std::vector<std::uint64_t> C;  // step costs
  std::vector<std::uint64_t> X;  // rank of C_j among the available costs S_j
  std::vector<std::uint64_t> Y;  // C_j - X_j
  std::vector<std::uint64_t> S_size;  // |S_j| = k - j + 1
  std::uint64_t total = 0;

  std::uint64_t sum_x() const { return std::accumulate(X.begin(), X.end(), std::uint64_t{0}); }
  std::uint64_t sum_y() const { return std::accumulate(Y.begin(), Y.end(), std::uint64_t{0}); }
};

template <Automaton A>
Decomposition xy_decompose(const A& a, std::span<const Letter> tau) {
  const int k = a.alphabet_size();
  if (static_cast<int>(tau.size()) != k) throw DomainError("xy_decompose needs a permutation of [k]");
  if (k > 64) throw ResourceError("xy_decompose supports k <= 64");
  std::uint64_t used = 0;
  for (Letter t : tau) {
    if (t < 1 || t > k || (used >> (t - 1) & 1u)) throw DomainError("xy_decompose needs a permutation of [k]");
    used |= std::uint64_t{1} << (t - 1);
  }
  Decomposition d;
  d.C.reserve(k);
  d.X.reserve(k);
  d.Y.reserve(k);
  d.S_size.reserve(k);
  auto v = a.root();
  used = 0;
  for (int j = 0; j < k; ++j) {
    if (!is_permutation_row(a, v)) throw DomainError("visited cost row is not a permutation of [k]");
    const Letter tj = tau[j];
    const std::uint64_t c = a.cost(v, tj).value();
    std::uint64_t rank = 1;
    std::uint64_t available = 0;
    for (Letter t = 1; t <= k; ++t) {
      if (used >> (t - 1) & 1u) continue;
      ++available;
      if (a.cost(v, t).value() < c) ++rank;
    }
    d.C.push_back(c);
    d.X.push_back(rank);
    d.Y.push_back(c - rank);
    d.S_size.push_back(available);
    d.total += c;
    used |= std::uint64_t{1} << (tj - 1);
    v = a.next(v, tj);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Collision statistic. For a state v, a prefix t_1..t_{j-1} and x,
//   T_{v,j,x} = #{ c in [x] : c = cost(v, t_{j'}) for some j' < j },
// the number of cost values <= x at v already taken by prefix letters, and
// T_{j,x} = min over states. Along the walk Y_j = T_{v_{j-1}, j, C_j} and
// Y_j >= T_{v_{j-1}, j, X_j} >= T_{j, X_j}.

namespace detail {

inline std::uint64_t prefix_mask(std::span<const Letter> prefix, int k) {
  if (k > 64) throw ResourceError("collision statistics support k <= 64");
  std::uint64_t m = 0;
  for (Letter t : prefix) {
    if (t < 1 || t > k) throw DomainError("prefix letter outside [k]");
    const std::uint64_t b = std::uint64_t{1} << (t - 1);
    if (m & b) throw DomainError("prefix is not injective");
    m |= b;
  }
  return m;
}

inline std::uint64_t low_values(std::uint64_t x) { return x >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << x) - 1; }

// Bitmask over cost values (bit c-1) taken at v by the letters in `letters`.
template <Automaton A>
std::uint64_t taken_values(const A& a, typename A::state_type v, std::uint64_t letters) {
  std::uint64_t m = 0;
  while (letters) {
    const int t = std::countr_zero(letters) + 1;
    letters &= letters - 1;
    m |= std::uint64_t{1} << (a.cost(v, t).value() - 1);
  }
  return m;
}

}  // namespace detail

template <Automaton A>
std::uint64_t collision_count(const A& a, typename A::state_type v, std::span<const Letter> prefix, std::uint64_t x) {
  const auto letters = detail::prefix_mask(prefix, a.alphabet_size());
  return static_cast<std::uint64_t>(std::popcount(detail::taken_values(a, v, letters) & detail::low_values(x)));
}

template <class State>
struct TStatistic {
  std::vector<std::uint64_t> per_state;  // T_{v,j,x}, in state_at order
  std::uint64_t min = 0;                 // T_{j,x}
  State argmin{};
};

template <EnumerableAutomaton A>
TStatistic<typename A::state_type> t_statistic(const A& a, std::span<const Letter> prefix, std::uint64_t x,
                                               const Caps& caps = {}) {
  const int k = a.alphabet_size();
  if (x > static_cast<std::uint64_t>(k)) throw DomainError("t_statistic needs x <= k");
  if (a.state_count() > caps.max_enumeration) throw ResourceError("t_statistic over too many states");
  const auto letters = detail::prefix_mask(prefix, k);
  TStatistic<typename A::state_type> s;
  s.per_state.reserve(a.state_count());
  for (std::uint64_t i = 0; i < a.state_count(); ++i) {
    const auto v = a.state_at(i);
    if (!is_permutation_row(a, v)) throw DomainError("cost row is not a permutation of [k]");
    const auto c = static_cast<std::uint64_t>(std::popcount(detail::taken_values(a, v, letters) & detail::low_values(x)));
    s.per_state.push_back(c);
    if (i == 0 || c < s.min) {
      s.min = c;
      s.argmin = v;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Frequency experiments over uniform random tau in S_k.

struct XSumReport {
  int k = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t sum = 0;          // sum over samples of sum_j X_j
  std::uint64_t sum_sq = 0;       // sum over samples of (sum_j X_j)^2
  std::uint64_t at_most_threshold = 0;
  double threshold = 0;

  double mean() const { return static_cast<double>(sum) / static_cast<double>(samples); }
  double variance() const {
    const double m = mean();
    return static_cast<double>(sum_sq) / static_cast<double>(samples) - m * m;
  }
  double frequency() const { return static_cast<double>(at_most_threshold) / static_cast<double>(samples); }
};

namespace detail {
struct XTally {
  std::uint64_t sum = 0, sum_sq = 0, hits = 0;
  XTally& operator+=(const XTally& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    hits += o.hits;
    return *this;
  }
};
}  // namespace detail

// Empirical law of sum_j X_j, with the frequency of sum_j X_j <= threshold.
template <Automaton A>
XSumReport x_sum_experiment(const A& a, double threshold, std::uint64_t samples, std::uint64_t seed,
                            unsigned threads = 1) {
  const int k = a.alphabet_size();
  if (samples == 0) throw DomainError("x_sum_experiment needs samples > 0");
  const auto t = parallel_reduce<detail::XTally>(samples, threads, [&](std::uint64_t b, std::uint64_t e) {
    detail::XTally tally;
    for (auto i = b; i < e; ++i) {
      KeyedRng rng(seed, i);
      const auto tau = sample_perm_word(k, k, rng);
      const std::uint64_t s = xy_decompose(a, tau.letters()).sum_x();
      tally.sum += s;
      tally.sum_sq += s * s;
      if (static_cast<double>(s) <= threshold) ++tally.hits;
    }
    return tally;
  });
  return {k, samples, seed, t.sum, t.sum_sq, t.hits, threshold};
}

struct ConcentrationCell {
  int m1 = 0;
  int m2 = 0;
  std::uint64_t con1_events = 0;       // too few j in the window with X_j/(k-j+1) > m2/M
  std::uint64_t con2_events = 0;       // T_{j,x} short for some j in the window
  std::uint64_t con2_root_events = 0;  // same with T measured at the root only
};

struct ConcentrationReport {
  int k = 0;
  int M = 0;
  double epsilon_star = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double c_con1 = 0;  // (1/2)(eps*/M)^2
  std::vector<ConcentrationCell> cells;  // (m1, m2) in [M-1]^2, row-major

  double frequency(std::uint64_t events) const { return static_cast<double>(events) / static_cast<double>(samples); }
};

namespace detail {

struct CellTally {
  std::vector<ConcentrationCell> cells;
  CellTally& operator+=(const CellTally& o) {
    if (cells.empty()) {
      cells = o.cells;
      return *this;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      cells[i].con1_events += o.cells[i].con1_events;
      cells[i].con2_events += o.cells[i].con2_events;
      cells[i].con2_root_events += o.cells[i].con2_root_events;
    }
    return *this;
  }
};

}  // namespace detail

// For each (m1, m2) in [M-1]^2 with window W = {j : m1 k/M < j <= (m1+1) k/M}
// and x = floor(m2 k / M), counts samples where
//   con1: |{j in W : X_j/(k-j+1) > m2/M}| < (1-eps*)(1-m2/M) k/M
//   con2: T_{j,x} < (1-eps*)(m2/M)(j-1) for some j in W.
// The minimum over states is taken by enumeration, or through the automaton's
// min_collision_state when it provides one.
template <Automaton A>
ConcentrationReport concentration_experiment(const A& a, int M, double epsilon_star, std::uint64_t samples,
                                             std::uint64_t seed, unsigned threads = 1, const Caps& caps = {}) {
  const int k = a.alphabet_size();
  if (M < 2) throw DomainError("concentration_experiment needs M >= 2");
  if (!(epsilon_star > 0)) throw DomainError("concentration_experiment needs eps* > 0");
  if (samples == 0) throw DomainError("concentration_experiment needs samples > 0");
  if (k > 64) throw ResourceError("concentration_experiment supports k <= 64");
  constexpr bool has_hint = requires(const A& x, typename A::state_type s) { x.min_collision_state(s); };
  if constexpr (!has_hint) {
    static_assert(EnumerableAutomaton<A>, "state minimum needs enumerable states or min_collision_state");
    if (saturating_mul(a.state_count(), static_cast<std::uint64_t>(k)) > caps.max_enumeration)
      throw ResourceError("concentration_experiment over too many states");
    detail::check_k_dfa(a, caps);
  }

  const auto in_window = [&](int m1, int j) {
    return static_cast<long long>(m1) * k < static_cast<long long>(j) * M &&
           static_cast<long long>(j) * M <= static_cast<long long>(m1 + 1) * k;
  };
  const long double es = epsilon_star;

  const auto tally = parallel_reduce<detail::CellTally>(samples, threads, [&](std::uint64_t b, std::uint64_t e) {
    detail::CellTally out;
    for (int m1 = 1; m1 < M; ++m1)
      for (int m2 = 1; m2 < M; ++m2) out.cells.push_back({m1, m2, 0, 0, 0});
    std::vector<std::uint64_t> taken;  // per-state taken-value masks, enumerable case
    for (auto i = b; i < e; ++i) {
      KeyedRng rng(seed, i);
      const auto tau = sample_perm_word(k, k, rng);
      const auto d = xy_decompose(a, tau.letters());
      // Tmin[j-1][m2-1] and Troot[j-1][m2-1] for j in [k], m2 in [M-1].
      std::vector<std::uint64_t> tmin(static_cast<std::size_t>(k) * (M - 1));
      std::vector<std::uint64_t> troot(static_cast<std::size_t>(k) * (M - 1));
      std::uint64_t prefix = 0;
      std::uint64_t root_taken = 0;
      if constexpr (!has_hint) taken.assign(a.state_count(), 0);
      for (int j = 1; j <= k; ++j) {
        for (int m2 = 1; m2 < M; ++m2) {
          const std::uint64_t lowx = detail::low_values(static_cast<std::uint64_t>(m2) * k / M);
          std::uint64_t best;
          if constexpr (has_hint) {
            best = std::popcount(detail::taken_values(a, a.min_collision_state(prefix), prefix) & lowx);
          } else {
            best = UINT64_MAX;
            for (auto& mask : taken) best = std::min<std::uint64_t>(best, std::popcount(mask & lowx));
          }
          tmin[(j - 1) * (M - 1) + (m2 - 1)] = best;
          troot[(j - 1) * (M - 1) + (m2 - 1)] = static_cast<std::uint64_t>(std::popcount(root_taken & lowx));
        }
        const Letter t = tau.letters()[j - 1];
        prefix |= std::uint64_t{1} << (t - 1);
        root_taken |= std::uint64_t{1} << (a.cost(a.root(), t).value() - 1);
        if constexpr (!has_hint) {
          for (std::uint64_t s = 0; s < taken.size(); ++s)
            taken[s] |= std::uint64_t{1} << (a.cost(a.state_at(s), t).value() - 1);
        }
      }
      for (auto& cell : out.cells) {
        const long double frac = static_cast<long double>(cell.m2) / M;
        std::uint64_t above = 0;
        bool short_min = false;
        bool short_root = false;
        for (int j = 1; j <= k; ++j) {
          if (!in_window(cell.m1, j)) continue;
          if (d.X[j - 1] * static_cast<std::uint64_t>(M) > static_cast<std::uint64_t>(cell.m2) * (k - j + 1)) ++above;
          const long double need = (1 - es) * frac * (j - 1);
          const std::size_t idx = static_cast<std::size_t>(j - 1) * (M - 1) + (cell.m2 - 1);
          if (static_cast<long double>(tmin[idx]) < need) short_min = true;
          if (static_cast<long double>(troot[idx]) < need) short_root = true;
        }
        if (static_cast<long double>(above) < (1 - es) * (1 - frac) * k / M) ++cell.con1_events;
        if (short_min) ++cell.con2_events;
        if (short_root) ++cell.con2_root_events;
      }
    }
    return out;
  });

  ConcentrationReport r;
  r.k = k;
  r.M = M;
  r.epsilon_star = epsilon_star;
  r.samples = samples;
  r.seed = seed;
  r.c_con1 = 0.5 * (epsilon_star / M) * (epsilon_star / M);
  r.cells = tally.cells;
  return r;
}

}  // namespace superpat
