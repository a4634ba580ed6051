#pragma once

// Weighted DFAs over the alphabet [k] with costs in {0,1,...} U {inf}, walks
// and their additive cost, k-DFAs (every cost row a permutation of [k]), and
// the automata used throughout: the greedy-embedding automaton of a word, its
// k-DFA cheapening, the subset automaton, the two-track automaton and random
// k-DFAs.

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "caps.hpp"
#include "error.hpp"
#include "ext_cost.hpp"
#include "parallel.hpp"
#include "patterns.hpp"
#include "rng.hpp"
#include "word.hpp"

namespace superpat {

template <class A>
concept Automaton = requires(const A& a, typename A::state_type s, Letter t) {
  { a.alphabet_size() } -> std::convertible_to<int>;
  { a.root() } -> std::convertible_to<typename A::state_type>;
  { a.next(s, t) } -> std::convertible_to<typename A::state_type>;
  { a.cost(s, t) } -> std::convertible_to<ExtCost>;
  { a.contains_state(s) } -> std::convertible_to<bool>;
};

// Automata whose states can be listed as state_at(0..state_count()-1).
template <class A>
concept EnumerableAutomaton = Automaton<A> && requires(const A& a, std::uint64_t i) {
  { a.state_count() } -> std::convertible_to<std::uint64_t>;
  { a.state_at(i) } -> std::convertible_to<typename A::state_type>;
};

// Dense table-backed weighted DFA. States are indices 0..N-1; each carries an
// integer label used for display (position in the word, signed track offset,
// subset bitmask, ...).
class WeightedDfa {
 public:
  using state_type = std::uint32_t;

  WeightedDfa() = default;

  WeightedDfa(int k, std::vector<std::int64_t> labels, state_type root, std::vector<state_type> delta,
              std::vector<ExtCost> cost)
      : k_(k), labels_(std::move(labels)), root_(root), delta_(std::move(delta)), cost_(std::move(cost)) {
    const std::size_t n = labels_.size();
    if (k_ < 1) throw DomainError("alphabet size must be positive");
    if (n == 0) throw DomainError("a DFA needs at least one state");
    if (root_ >= n) throw DomainError("root is not a state");
    if (delta_.size() != n * k_ || cost_.size() != n * k_)
      throw DomainError("transition and cost tables must be total on V x [k]");
    for (state_type u : delta_)
      if (u >= n) throw DomainError("transition target is not a state");
  }

  int alphabet_size() const { return k_; }
  state_type root() const { return root_; }
  std::uint64_t state_count() const { return labels_.size(); }
  state_type state_at(std::uint64_t i) const { return static_cast<state_type>(i); }
  bool contains_state(state_type v) const { return v < labels_.size(); }

  state_type next(state_type v, Letter t) const { return delta_[index(v, t)]; }
  ExtCost cost(state_type v, Letter t) const { return cost_[index(v, t)]; }
  std::span<const ExtCost> cost_row(state_type v) const {
    return std::span<const ExtCost>(cost_).subspan(static_cast<std::size_t>(v) * k_, k_);
  }

  std::int64_t label(state_type v) const { return labels_.at(v); }
  std::span<const std::int64_t> labels() const { return labels_; }
  std::optional<state_type> find_label(std::int64_t label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<state_type>(it - labels_.begin());
  }

  std::span<const state_type> transitions() const { return delta_; }
  std::span<const ExtCost> costs() const { return cost_; }

  // Same underlying DFA, different cost function.
  WeightedDfa with_costs(std::vector<ExtCost> cost) const {
    return WeightedDfa(k_, labels_, root_, delta_, std::move(cost));
  }

  friend bool operator==(const WeightedDfa&, const WeightedDfa&) = default;

 private:
  std::size_t index(state_type v, Letter t) const {
    if (v >= labels_.size()) throw DomainError("unknown state " + std::to_string(v));
    if (t < 1 || t > k_) throw DomainError("letter " + std::to_string(t) + " outside [" + std::to_string(k_) + "]");
    return static_cast<std::size_t>(v) * k_ + (t - 1);
  }

  int k_ = 0;
  std::vector<std::int64_t> labels_;
  state_type root_ = 0;
  std::vector<state_type> delta_;
  std::vector<ExtCost> cost_;
};

// The walk v_0,...,v_L read from a start state, with per-step costs.
template <class State>
struct WalkTrace {
  std::vector<State> states;
  std::vector<ExtCost> step_costs;
  ExtCost total;

  // A step that stays put on an infinite-cost self-loop.
  bool failed() const { return total.is_infinite(); }
};

template <Automaton A>
WalkTrace<typename A::state_type> walk_cost(const A& a, typename A::state_type start, std::span<const Letter> w) {
  if (!a.contains_state(start)) throw DomainError("unknown start state");
  WalkTrace<typename A::state_type> trace;
  trace.states.reserve(w.size() + 1);
  trace.step_costs.reserve(w.size());
  trace.states.push_back(start);
  auto v = start;
  for (Letter t : w) {
    if (t < 1 || t > a.alphabet_size())
      throw DomainError("letter " + std::to_string(t) + " outside [" + std::to_string(a.alphabet_size()) + "]");
    const ExtCost c = a.cost(v, t);
    trace.step_costs.push_back(c);
    trace.total += c;
    v = a.next(v, t);
    trace.states.push_back(v);
  }
  return trace;
}

template <Automaton A>
typename A::state_type transition(const A& a, typename A::state_type v, std::span<const Letter> w) {
  for (Letter t : w) v = a.next(v, t);
  return v;
}

template <Automaton A>
bool is_permutation_row(const A& a, typename A::state_type v) {
  const int k = a.alphabet_size();
  std::vector<char> seen(k + 1, 0);
  for (Letter t = 1; t <= k; ++t) {
    const ExtCost c = a.cost(v, t);
    if (c.is_infinite() || c.value() < 1 || c.value() > static_cast<std::uint64_t>(k) || seen[c.value()]) return false;
    seen[c.value()] = 1;
  }
  return true;
}

// True iff every state's cost row is a permutation of [k].
template <EnumerableAutomaton A>
bool is_k_dfa(const A& a, const Caps& caps = {}) {
  if (a.state_count() > caps.max_enumeration)
    throw ResourceError("is_k_dfa would visit " + std::to_string(a.state_count()) + " states");
  for (std::uint64_t i = 0; i < a.state_count(); ++i)
    if (!is_permutation_row(a, a.state_at(i))) return false;
  return true;
}

template <EnumerableAutomaton A>
void require_k_dfa(const A& a, const Caps& caps = {}) {
  if (!is_k_dfa(a, caps)) throw DomainError("automaton is not a k-DFA");
}

// ---------------------------------------------------------------------------
// Greedy-embedding automaton of sigma in [k]^n. States 0..n, root 0; reading t
// at v jumps to the next occurrence u of t after v at cost u - v, or fails
// with an infinite-cost self-loop.

inline WeightedDfa build_greedy_dfa(const Word& sigma) {
  const int k = sigma.alphabet_size();
  if (k < 1) throw DomainError("greedy DFA needs a positive alphabet size");
  const std::size_t n = sigma.size();
  const auto next = detail::next_occurrence_table(sigma.letters(), k);
  std::vector<std::int64_t> labels(n + 1);
  std::iota(labels.begin(), labels.end(), 0);
  std::vector<WeightedDfa::state_type> delta((n + 1) * k);
  std::vector<ExtCost> cost((n + 1) * k);
  for (std::size_t v = 0; v <= n; ++v) {
    for (int t = 1; t <= k; ++t) {
      const std::size_t i = v * k + (t - 1);
      const std::uint32_t u = next[i];
      if (u != 0) {
        delta[i] = u;
        cost[i] = ExtCost(u - v);
      } else {
        delta[i] = static_cast<WeightedDfa::state_type>(v);
        cost[i] = kInfinity;
      }
    }
  }
  return WeightedDfa(k, std::move(labels), 0, std::move(delta), std::move(cost));
}

// k-DFA on the same underlying DFA with pointwise lower costs. At each state
// the letters T = {t : cost(v,t) <= k} keep their costs and the remaining
// letters take the unused values of [k] in ascending letter order; this is the
// lexicographically least permutation agreeing with the row on T.
inline WeightedDfa cheapen(const WeightedDfa& a) {
  const int k = a.alphabet_size();
  std::vector<ExtCost> cost(a.costs().begin(), a.costs().end());
  for (std::uint64_t v = 0; v < a.state_count(); ++v) {
    const auto row = a.cost_row(static_cast<WeightedDfa::state_type>(v));
    std::vector<char> used(k + 1, 0);
    std::vector<char> fixed(k + 1, 0);
    for (int t = 1; t <= k; ++t) {
      const ExtCost c = row[t - 1];
      if (c.is_finite() && c.value() <= static_cast<std::uint64_t>(k)) {
        if (c.value() == 0 || used[c.value()])
          throw DomainError("state " + std::to_string(a.label(static_cast<WeightedDfa::state_type>(v))) +
                            " admits no dominating permutation");
        used[c.value()] = 1;
        fixed[t] = 1;
      }
    }
    int next_value = 1;
    for (int t = 1; t <= k; ++t) {
      if (fixed[t]) continue;
      while (used[next_value]) ++next_value;
      used[next_value] = 1;
      cost[v * k + (t - 1)] = ExtCost(static_cast<std::uint64_t>(next_value));
    }
  }
  return a.with_costs(std::move(cost));
}

// ---------------------------------------------------------------------------
// Subset automaton: states are subsets of [k] (bitmask, bit t-1 for letter t),
// root is the empty set and reading t adds t. At state v the letters outside v
// cost 1..k-|v| and the letters inside v cost k-|v|+1..k, each group in
// ascending letter order, so t is in v iff cost(v,t) > k-|v|.
class SubsetDfa {
 public:
  using state_type = std::uint64_t;

  explicit SubsetDfa(int k, const Caps& caps = {}) : k_(k) {
    if (k < 1) throw DomainError("subset DFA needs k >= 1");
    if (k > caps.max_lazy_subset_k || k > 63)
      throw ResourceError("subset DFA with k = " + std::to_string(k) + " exceeds max_lazy_subset_k");
  }

  int alphabet_size() const { return k_; }
  state_type root() const { return 0; }
  std::uint64_t state_count() const { return std::uint64_t{1} << k_; }
  state_type state_at(std::uint64_t i) const { return i; }
  bool contains_state(state_type v) const { return v < state_count(); }

  state_type next(state_type v, Letter t) const { return v | bit(t); }

  ExtCost cost(state_type v, Letter t) const {
    const int size = std::popcount(v);
    const int below = std::popcount(v & (bit(t) - 1));
    if (v & bit(t)) return ExtCost(static_cast<std::uint64_t>(k_ - size + below + 1));
    return ExtCost(static_cast<std::uint64_t>(t - below));
  }

  // A state minimizing, over all states, the number of cost values <= x taken
  // by the letters in `prefix`. At state prefix those letters hold the top
  // |prefix| values, which meets the lower bound max(0, x - (k - |prefix|))
  // valid for any k-DFA, for every x simultaneously.
  state_type min_collision_state(state_type prefix) const { return prefix; }

  WeightedDfa materialize(const Caps& caps = {}) const {
    if (k_ > caps.max_full_subset_k)
      throw ResourceError("materializing 2^" + std::to_string(k_) + " subset states exceeds max_full_subset_k");
    const std::uint64_t n = state_count();
    std::vector<std::int64_t> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    std::vector<WeightedDfa::state_type> delta(n * k_);
    std::vector<ExtCost> cost(n * k_);
    for (std::uint64_t v = 0; v < n; ++v) {
      for (int t = 1; t <= k_; ++t) {
        delta[v * k_ + (t - 1)] = static_cast<WeightedDfa::state_type>(next(v, t));
        cost[v * k_ + (t - 1)] = this->cost(v, t);
      }
    }
    return WeightedDfa(k_, std::move(labels), 0, std::move(delta), std::move(cost));
  }

 private:
  state_type bit(Letter t) const {
    if (t < 1 || t > k_) throw DomainError("letter " + std::to_string(t) + " outside [" + std::to_string(k_) + "]");
    return state_type{1} << (t - 1);
  }

  int k_;
};

// ---------------------------------------------------------------------------
// Two-track automaton for k = 2m with A = [m], B = [2m] \ [m]. States are the
// offsets -m..m (label) with root 0; letters of A step down, letters of B step
// up, holding at the ends. cost(v,t) = t for v < 0, t + m for v >= 0 and t in
// A, t - m for v >= 0 and t in B.
inline WeightedDfa build_two_track_dfa(int k) {
  if (k < 2 || k % 2 != 0)
    throw DomainError("two-track DFA is only defined for even k >= 2 (got " + std::to_string(k) + ")");
  const int m = k / 2;
  const int n = 2 * m + 1;
  std::vector<std::int64_t> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i - m;
  std::vector<WeightedDfa::state_type> delta(static_cast<std::size_t>(n) * k);
  std::vector<ExtCost> cost(static_cast<std::size_t>(n) * k);
  for (int i = 0; i < n; ++i) {
    const int v = i - m;
    for (int t = 1; t <= k; ++t) {
      const bool in_a = t <= m;
      int u = v;
      if (in_a && v != -m) u = v - 1;
      if (!in_a && v != m) u = v + 1;
      const int c = v < 0 ? t : (in_a ? t + m : t - m);
      delta[static_cast<std::size_t>(i) * k + (t - 1)] = static_cast<WeightedDfa::state_type>(u + m);
      cost[static_cast<std::size_t>(i) * k + (t - 1)] = ExtCost(static_cast<std::uint64_t>(c));
    }
  }
  return WeightedDfa(k, std::move(labels), static_cast<WeightedDfa::state_type>(m), std::move(delta), std::move(cost));
}

// Writes every cost of a k-DFA with k = 2m as m*q(v,t) + r(t), q in {0,1},
// r(t) in [m].
struct TrackSplit {
  int m = 0;
  std::vector<int> residue;         // r(t), index t-1, taken from the root row
  bool residue_state_independent = true;
  bool quotient_binary = true;      // every q(v,t) in {0,1}
  std::uint64_t residue_sum = 0;
};

inline TrackSplit split_costs(const WeightedDfa& a) {
  const int k = a.alphabet_size();
  if (k % 2 != 0) throw DomainError("cost split needs even k");
  TrackSplit s;
  s.m = k / 2;
  const auto split = [&](ExtCost c) {
    const auto v = static_cast<long long>(c.value());
    const long long r = (v - 1) % s.m + 1;
    return std::pair<long long, long long>((v - r) / s.m, r);
  };
  for (int t = 1; t <= k; ++t) s.residue.push_back(static_cast<int>(split(a.cost(a.root(), t)).second));
  for (std::uint64_t v = 0; v < a.state_count(); ++v) {
    for (int t = 1; t <= k; ++t) {
      const auto [q, r] = split(a.cost(static_cast<WeightedDfa::state_type>(v), t));
      if (q != 0 && q != 1) s.quotient_binary = false;
      if (r != s.residue[t - 1]) s.residue_state_independent = false;
    }
  }
  for (int r : s.residue) s.residue_sum += static_cast<std::uint64_t>(r);
  return s;
}

// N-state k-DFA with uniform transitions and independent uniform cost rows.
inline WeightedDfa random_k_dfa(int k, std::uint32_t states, std::uint64_t seed) {
  if (k < 1) throw DomainError("random k-DFA needs k >= 1");
  if (states < 1) throw DomainError("random k-DFA needs at least one state");
  KeyedRng rng(seed, 0);
  std::vector<std::int64_t> labels(states);
  std::iota(labels.begin(), labels.end(), 0);
  std::vector<WeightedDfa::state_type> delta(static_cast<std::size_t>(states) * k);
  std::vector<ExtCost> cost(static_cast<std::size_t>(states) * k);
  std::vector<std::uint64_t> row(k);
  for (std::uint32_t v = 0; v < states; ++v) {
    for (int t = 0; t < k; ++t) delta[static_cast<std::size_t>(v) * k + t] = static_cast<std::uint32_t>(rng.below(states));
    std::iota(row.begin(), row.end(), 1);
    for (int i = k - 1; i > 0; --i) std::swap(row[i], row[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    for (int t = 0; t < k; ++t) cost[static_cast<std::size_t>(v) * k + t] = ExtCost(row[t]);
  }
  return WeightedDfa(k, std::move(labels), 0, std::move(delta), std::move(cost));
}

// ---------------------------------------------------------------------------
// Census of root-walk costs over all of S_k.

struct PermCostCensus {
  std::vector<std::uint64_t> by_cost;  // by_cost[c] = #tau with finite cost c
  std::uint64_t infinite = 0;

  std::uint64_t count_at_most(std::uint64_t n) const {
    std::uint64_t s = 0;
    for (std::uint64_t c = 0; c < by_cost.size() && c <= n; ++c) s += by_cost[c];
    return s;
  }
  std::uint64_t total() const { return count_at_most(UINT64_MAX) + infinite; }

  PermCostCensus& operator+=(const PermCostCensus& o) {
    if (o.by_cost.size() > by_cost.size()) by_cost.resize(o.by_cost.size(), 0);
    for (std::size_t c = 0; c < o.by_cost.size(); ++c) by_cost[c] += o.by_cost[c];
    infinite += o.infinite;
    return *this;
  }
};

namespace detail {

template <Automaton A>
void census_dfs(const A& a, typename A::state_type v, std::uint32_t used, int depth, std::uint64_t cost,
                PermCostCensus& out) {
  const int k = a.alphabet_size();
  if (depth == k) {
    if (out.by_cost.size() <= cost) out.by_cost.resize(cost + 1, 0);
    ++out.by_cost[cost];
    return;
  }
  for (Letter t = 1; t <= k; ++t) {
    if (used >> (t - 1) & 1u) continue;
    const ExtCost c = a.cost(v, t);
    if (c.is_infinite()) {
      out.infinite += factorial(k - depth - 1);
      continue;
    }
    census_dfs(a, a.next(v, t), used | (1u << (t - 1)), depth + 1, cost + c.value(), out);
  }
}

}  // namespace detail

// Distribution of cost(root, tau) over tau in S_k. Work is split by first letter.
template <Automaton A>
PermCostCensus perm_cost_census(const A& a, const Caps& caps = {}, unsigned threads = 1) {
  const int k = a.alphabet_size();
  require_perm_k(k, caps);
  return parallel_reduce<PermCostCensus>(static_cast<std::uint64_t>(k), threads,
                                         [&](std::uint64_t begin, std::uint64_t end) {
                                           PermCostCensus part;
                                           const auto root = a.root();
                                           for (auto i = begin; i < end; ++i) {
                                             const Letter t = static_cast<Letter>(i) + 1;
                                             const ExtCost c = a.cost(root, t);
                                             if (c.is_infinite()) {
                                               part.infinite += detail::factorial(k - 1);
                                               continue;
                                             }
                                             detail::census_dfs(a, a.next(root, t), 1u << (t - 1), 1, c.value(), part);
                                           }
                                           return part;
                                         });
}

// |{tau in S_k : cost(root, tau) <= n}|.
template <Automaton A>
std::uint64_t cheap_perm_count(const A& a, std::uint64_t n, const Caps& caps = {}, unsigned threads = 1) {
  return perm_cost_census(a, caps, threads).count_at_most(n);
}

}  // namespace superpat
