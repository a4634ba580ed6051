#pragma once

// Pattern containment for words over [r]. Containment of a k-pattern is
// decided by splitting over the k-element value sets Y and greedily embedding
// into the relabeled restriction of the word to Y; over [k] the greedy
// leftmost-next-occurrence embedding succeeds exactly when any embedding
// exists.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "caps.hpp"
#include "error.hpp"
#include "word.hpp"

namespace superpat {

namespace detail {

// Calls fn(span of chosen indices into [0,n)) for every k-subset, in
// lexicographic order. fn returns false to stop.
template <class Fn>
bool for_each_combination(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return true;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(std::span<const int>(idx))) return false;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline std::vector<Letter> distinct_values(const Word& w) {
  std::vector<Letter> vals(w.letters().begin(), w.letters().end());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

// Restriction of a word to a value set Y, relabeled by rank within Y, plus the
// original 1-based positions of the kept letters.
struct Restriction {
  std::vector<Letter> letters;
  std::vector<std::size_t> positions;
};

inline Restriction restrict_to_values(const Word& w, std::span<const Letter> values_sorted) {
  Restriction r;
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto it = std::lower_bound(values_sorted.begin(), values_sorted.end(), w.letters()[i]);
    if (it != values_sorted.end() && *it == w.letters()[i]) {
      r.letters.push_back(static_cast<Letter>(it - values_sorted.begin()) + 1);
      r.positions.push_back(i + 1);
    }
  }
  return r;
}

// next[i*k + (t-1)] = least 1-based position p > i with w(p) = t, or 0.
inline std::vector<std::uint32_t> next_occurrence_table(std::span<const Letter> w, int k) {
  const std::size_t n = w.size();
  std::vector<std::uint32_t> next((n + 1) * static_cast<std::size_t>(k), 0);
  for (std::size_t i = n; i-- > 0;) {
    std::copy_n(next.begin() + static_cast<std::ptrdiff_t>((i + 1) * k), k, next.begin() + static_cast<std::ptrdiff_t>(i * k));
    next[i * k + (w[i] - 1)] = static_cast<std::uint32_t>(i + 1);
  }
  return next;
}

// Greedy embedding of tau into w in [k]^n; positions are 1-based.
inline std::optional<std::vector<std::size_t>> greedy_positions(std::span<const Letter> w, std::span<const int> tau) {
  std::vector<std::size_t> out;
  out.reserve(tau.size());
  std::size_t pos = 0;
  for (int t : tau) {
    while (pos < w.size() && w[pos] != t) ++pos;
    if (pos == w.size()) return std::nullopt;
    out.push_back(++pos);
  }
  return out;
}

inline std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// Marks, by Lehmer rank, every tau in S_k greedily embeddable into w in [k]^n.
// Returns the number of newly marked ranks.
inline std::uint64_t mark_embeddable(std::span<const Letter> w, int k, std::vector<char>& seen) {
  if (k == 0) {
    if (seen[0]) return 0;
    seen[0] = 1;
    return 1;
  }
  const auto next = next_occurrence_table(w, k);
  std::vector<std::uint64_t> weight(k);
  for (int j = 0; j < k; ++j) weight[j] = factorial(k - 1 - j);
  std::uint64_t fresh = 0;
  // Explicit-stack DFS over (position, used letters, partial rank).
  struct Frame {
    std::uint32_t pos;
    std::uint32_t used;
    std::uint64_t rank;
    int depth;
  };
  std::vector<Frame> stack{{0, 0, 0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.depth == k) {
      if (!seen[f.rank]) {
        seen[f.rank] = 1;
        ++fresh;
      }
      continue;
    }
    int smaller_unused = 0;
    for (int t = 1; t <= k; ++t) {
      if (f.used >> (t - 1) & 1u) continue;
      std::uint32_t p = next[f.pos * static_cast<std::size_t>(k) + (t - 1)];
      if (p != 0) stack.push_back({p, f.used | (1u << (t - 1)), f.rank + smaller_unused * weight[f.depth], f.depth + 1});
      ++smaller_unused;
    }
  }
  return fresh;
}

inline Permutation unrank_permutation(std::uint64_t rank, int k) {
  std::vector<int> pool(k);
  for (int i = 0; i < k; ++i) pool[i] = i + 1;
  std::vector<int> out;
  out.reserve(k);
  for (int j = 0; j < k; ++j) {
    std::uint64_t w = factorial(k - 1 - j);
    auto idx = static_cast<std::size_t>(rank / w);
    rank %= w;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return Permutation(std::move(out));
}

// Marks patterns of an arbitrary word by iterating its k-subsets of values.
inline std::uint64_t mark_patterns(const Word& sigma, int k, std::vector<char>& seen) {
  const auto values = distinct_values(sigma);
  std::uint64_t total = 0;
  const std::uint64_t all = factorial(k);
  for_each_combination(static_cast<int>(values.size()), k, [&](std::span<const int> pick) {
    std::vector<Letter> ys;
    for (int i : pick) ys.push_back(values[i]);
    auto restricted = restrict_to_values(sigma, ys);
    total += mark_embeddable(restricted.letters, k, seen);
    return total < all;
  });
  return total;
}

}  // namespace detail

// Leftmost greedy embedding of tau into sigma in [k]^n.
inline std::optional<Embedding> greedy_embed(const Word& sigma, const Permutation& tau) {
  if (sigma.alphabet_size() != tau.size())
    throw DomainError("greedy_embed needs a word over [k] for tau in S_k (alphabet " +
                      std::to_string(sigma.alphabet_size()) + ", k = " + std::to_string(tau.size()) + ")");
  auto pos = detail::greedy_positions(sigma.letters(), tau.images());
  if (!pos) return std::nullopt;
  return Embedding{std::move(*pos)};
}

// Lexicographically least embedding of tau into sigma, if any.
inline std::optional<Embedding> find_embedding(const Word& sigma, const Permutation& tau) {
  const int k = tau.size();
  if (k == 0) return Embedding{};
  const auto values = detail::distinct_values(sigma);
  std::optional<Embedding> best;
  detail::for_each_combination(static_cast<int>(values.size()), k, [&](std::span<const int> pick) {
    std::vector<Letter> ys;
    for (int i : pick) ys.push_back(values[i]);
    auto restricted = detail::restrict_to_values(sigma, ys);
    if (auto pos = detail::greedy_positions(restricted.letters, tau.images())) {
      Embedding e;
      for (std::size_t p : *pos) e.indices.push_back(restricted.positions[p - 1]);
      if (!best || e < *best) best = std::move(e);
    }
    return true;
  });
  return best;
}

inline bool is_pattern(const Word& sigma, const Permutation& tau) {
  const int k = tau.size();
  if (k == 0) return true;
  const auto values = detail::distinct_values(sigma);
  bool found = false;
  detail::for_each_combination(static_cast<int>(values.size()), k, [&](std::span<const int> pick) {
    std::vector<Letter> ys;
    for (int i : pick) ys.push_back(values[i]);
    auto restricted = detail::restrict_to_values(sigma, ys);
    found = detail::greedy_positions(restricted.letters, tau.images()).has_value();
    return !found;
  });
  return found;
}

// Number of tau in S_k contained in sigma.
inline std::uint64_t pattern_count(const Word& sigma, int k, const Caps& caps = {}) {
  if (k < 0) throw DomainError("k must be non-negative");
  require_perm_k(k, caps);
  std::vector<char> seen(detail::factorial(k), 0);
  return detail::mark_patterns(sigma, k, seen);
}

// All tau in S_k contained in sigma, in lexicographic order.
inline std::vector<Permutation> pattern_set(const Word& sigma, int k, const Caps& caps = {}) {
  if (k < 0) throw DomainError("k must be non-negative");
  require_perm_k(k, caps);
  std::vector<char> seen(detail::factorial(k), 0);
  detail::mark_patterns(sigma, k, seen);
  std::vector<Permutation> out;
  for (std::uint64_t r = 0; r < seen.size(); ++r)
    if (seen[r]) out.push_back(detail::unrank_permutation(r, k));
  return out;
}

inline bool is_superpattern(const Word& sigma, int k, const Caps& caps = {}) {
  return pattern_count(sigma, k, caps) == detail::factorial(k);
}

// True iff tau is a pattern of some rotation of sigma, or, when bidirectional,
// of some rotation of its reversal.
inline bool circular_contains(const Word& sigma, const Permutation& tau, bool bidirectional) {
  if (sigma.empty()) return tau.size() == 0;
  for (std::size_t i = 1; i <= sigma.size(); ++i)
    if (is_pattern(sigma.rotated(i), tau)) return true;
  if (bidirectional) {
    const Word rev = sigma.reversed();
    for (std::size_t i = 1; i <= rev.size(); ++i)
      if (is_pattern(rev.rotated(i), tau)) return true;
  }
  return false;
}

inline int ascent_count(const Permutation& tau) {
  int a = 0;
  for (int j = 1; j < tau.size(); ++j)
    if (tau.at(j) < tau.at(j + 1)) ++a;
  return a;
}

// m copies of 1,2,...,k.
inline Word repeat_word(int k, int m) {
  if (k < 1 || m < 1) throw DomainError("repeat_word needs k, m >= 1");
  std::vector<Letter> w;
  w.reserve(static_cast<std::size_t>(k) * m);
  for (int c = 0; c < m; ++c)
    for (int t = 1; t <= k; ++t) w.push_back(t);
  return Word(std::move(w), k);
}

// ---------------------------------------------------------------------------
// Exhaustive searches over words. When r = k every k-pattern uses all k
// letters, so a bijective relabeling of the letters permutes the pattern set
// and keeps its size. Such searches visit only first-occurrence canonical
// words (letter 1 first, each new letter the next unused one), and the
// canonical word is the lexicographically least member of its class. For
// r != k only the complement t -> r + 1 - t is used: it maps the pattern set
// onto the complements of those patterns, so words whose first letter exceeds
// (r + 1) / 2 are skipped.

namespace detail {

// Calls fn(letters) for every word of [r]^n with first letter at most
// (r + 1) / 2, in lexicographic order. fn returns false to stop.
template <class Fn>
void for_each_half_word(int n, int r, Fn&& fn) {
  std::vector<Letter> w(n, 1);
  if (n == 0) {
    fn(std::span<const Letter>(w));
    return;
  }
  const int first_max = (r + 1) / 2;
  while (true) {
    if (!fn(std::span<const Letter>(w))) return;
    int i = n - 1;
    while (i >= 0 && w[i] == (i == 0 ? first_max : r)) --i;
    if (i < 0) return;
    ++w[i];
    for (int j = i + 1; j < n; ++j) w[j] = 1;
  }
}

// Calls fn(letters) for every canonical word of length n using at most r
// letters, in lexicographic order. fn returns false to stop.
template <class Fn>
void for_each_canonical_word(int n, int r, Fn&& fn) {
  std::vector<Letter> w(n, 1);
  if (n == 0) {
    fn(std::span<const Letter>(w));
    return;
  }
  std::vector<int> prefix_max(n, 1);  // prefix_max[i] = max of w[0..i]
  while (true) {
    if (!fn(std::span<const Letter>(w))) return;
    int i = n - 1;
    while (i > 0 && (w[i] > prefix_max[i - 1] || w[i] == r)) --i;
    if (i == 0) return;
    ++w[i];
    prefix_max[i] = std::max(prefix_max[i - 1], w[i]);
    for (int j = i + 1; j < n; ++j) {
      w[j] = 1;
      prefix_max[j] = prefix_max[j - 1];
    }
  }
}

}  // namespace detail

struct FOracleResult {
  std::uint64_t max_count = 0;
  Word witness;
};

// Exact F(k,n): the largest number of k-patterns in a word of [k]^n, with the
// lexicographically least maximizing word.
inline FOracleResult f_oracle(int k, int n, const Caps& caps = {}) {
  if (k < 1 || n < 0) throw DomainError("f_oracle needs k >= 1, n >= 0");
  if (k > caps.f_oracle_max_k || n > caps.f_oracle_max_n)
    throw ResourceError("f_oracle(" + std::to_string(k) + "," + std::to_string(n) + ") exceeds caps k <= " +
                        std::to_string(caps.f_oracle_max_k) + ", n <= " + std::to_string(caps.f_oracle_max_n));
  require_perm_k(k, caps);
  FOracleResult best;
  bool have = false;
  std::vector<char> seen(detail::factorial(k));
  detail::for_each_canonical_word(n, k, [&](std::span<const Letter> w) {
    std::fill(seen.begin(), seen.end(), 0);
    std::uint64_t c = 0;
    const int used = n == 0 ? 0 : *std::max_element(w.begin(), w.end());
    if (used == k) c = detail::mark_embeddable(w, k, seen);
    if (!have || c > best.max_count) {
      best.max_count = c;
      best.witness = Word(std::vector<Letter>(w.begin(), w.end()), k);
      have = true;
    }
    return c < detail::factorial(k);
  });
  return best;
}

struct FSearchRow {
  int n = 0;
  bool exists = false;
  std::optional<Word> witness;  // lexicographically least superpattern of length n
};

// For n = 0..n_max, whether some word in [r]^n is a k-superpattern. The least
// n with exists = true is f(k;r).
inline std::vector<FSearchRow> exhaustive_f_search(int k, int r, int n_max, const Caps& caps = {}) {
  if (k < 0 || r < 0 || n_max < 0) throw DomainError("exhaustive_f_search needs non-negative arguments");
  require_perm_k(k, caps);
  if (saturating_pow(static_cast<std::uint64_t>(r), n_max) > caps.max_enumeration)
    throw ResourceError("r^n_max = " + std::to_string(r) + "^" + std::to_string(n_max) +
                        " exceeds max_enumeration = " + std::to_string(caps.max_enumeration));
  const std::uint64_t all = detail::factorial(k);
  std::vector<FSearchRow> rows;
  std::vector<char> seen(all);
  for (int n = 0; n <= n_max; ++n) {
    FSearchRow row{n, false, std::nullopt};
    const auto visit = [&](std::span<const Letter> w) {
      if (r == 0 && n > 0) return false;
      std::fill(seen.begin(), seen.end(), 0);
      Word word(std::vector<Letter>(w.begin(), w.end()), r);
      if (detail::mark_patterns(word, k, seen) == all) {
        row.exists = true;
        row.witness = std::move(word);
        return false;
      }
      return true;
    };
    if (r == k)
      detail::for_each_canonical_word(n, std::max(r, 1), visit);
    else
      detail::for_each_half_word(n, std::max(r, 1), visit);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::optional<int> least_superpattern_length(const std::vector<FSearchRow>& rows) {
  for (const auto& row : rows)
    if (row.exists) return row.n;
  return std::nullopt;
}

}  // namespace superpat
