#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "superpat/superpat.hpp"

using namespace superpat;

namespace {

Word W(std::vector<int> xs) { return Word::from_letters(std::move(xs)); }
Permutation P(std::vector<int> xs) { return Permutation(std::move(xs)); }

std::vector<int> seq(std::span<const int> xs) { return {xs.begin(), xs.end()}; }

std::vector<int> random_word(std::mt19937_64& gen, int r, int n) {
  std::uniform_int_distribution<int> d(1, r);
  std::vector<int> w(n);
  for (auto& x : w) x = d(gen);
  return w;
}

}  // namespace

TEST(Word, ValidatesAlphabet) {
  EXPECT_THROW(Word({1, 4}, 3), DomainError);
  EXPECT_THROW(Word({0}, 3), DomainError);
  EXPECT_EQ(W({2, 5, 1}).alphabet_size(), 5);
  EXPECT_EQ(W({2, 5, 1}).at(2), 5);
}

TEST(Permutation, ValidatesBijection) {
  EXPECT_THROW(P({1, 1}), DomainError);
  EXPECT_THROW(P({1, 3}), DomainError);
  EXPECT_EQ(P({3, 1, 2}).at(1), 3);
}

TEST(TextFormat, RoundTrip) {
  const Word w({2, 1, 2}, 4);
  const Word back = parse_word(format_word(w));
  EXPECT_EQ(back, w);
  EXPECT_EQ(back.alphabet_size(), 4);
  EXPECT_EQ(parse_word("3 1 2\n").alphabet_size(), 3);
  EXPECT_EQ(parse_permutation("2 3 1"), P({2, 3, 1}));
  EXPECT_THROW(parse_word("1 x 2"), DomainError);
}

TEST(IsPattern, Examples) {
  EXPECT_TRUE(is_pattern(W({2, 5, 1, 4, 3}), P({3, 1, 2})));
  EXPECT_TRUE(is_pattern(W({4, 4, 2}), P({1})));
  EXPECT_FALSE(is_pattern(W({1, 2, 3, 2}), P({2, 1, 3})));
}

TEST(FindEmbedding, LeastWitness) {
  const auto e = find_embedding(W({2, 5, 1, 4, 3}), P({3, 1, 2}));
  ASSERT_TRUE(e);
  EXPECT_EQ(e->indices, (std::vector<std::size_t>{2, 3, 4}));
}

TEST(GreedyEmbed, Examples) {
  const Word s = W({1, 2, 3, 2});
  ASSERT_TRUE(greedy_embed(s, P({1, 2, 3})));
  EXPECT_EQ(greedy_embed(s, P({1, 2, 3}))->indices, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_FALSE(greedy_embed(s, P({2, 1, 3})));
  EXPECT_EQ(greedy_embed(W({1, 2, 3}), P({1, 2, 3}))->indices, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_THROW(greedy_embed(W({1, 2}), P({1, 2, 3})), DomainError);
}

TEST(PatternSet, Examples) {
  const auto s = pattern_set(W({1, 2, 3, 2}), 3);
  EXPECT_EQ(s, (std::vector<Permutation>{P({1, 2, 3}), P({1, 3, 2})}));
  EXPECT_EQ(pattern_set(repeat_word(3, 3), 3).size(), 6u);
  EXPECT_TRUE(pattern_set(Word({1, 1, 1}, 3), 3).empty());
}

TEST(PatternSet, ZeroLengthConventions) {
  EXPECT_EQ(pattern_count(W({1, 2}), 0), 1u);
  EXPECT_TRUE(is_superpattern(W({1, 2}), 0));
  EXPECT_TRUE(is_superpattern(Word({}, 1), 0));
}

TEST(IsSuperpattern, Examples) {
  EXPECT_TRUE(is_superpattern(repeat_word(3, 3), 3));
  EXPECT_FALSE(is_superpattern(W({1, 2, 3, 2}), 3));
  EXPECT_FALSE(is_superpattern(Word({}, 1), 1));
}

TEST(IsPattern, MatchesIndexSubsetOracle) {
  std::mt19937_64 gen(20240601);
  for (int trial = 0; trial < 300; ++trial) {
    const int r = 1 + static_cast<int>(gen() % 6);
    const int n = static_cast<int>(gen() % 10);
    const auto w = random_word(gen, r, n);
    const Word sigma(w, r);
    for (int k = 1; k <= std::min(r, 4); ++k) {
      for (const auto& tau : oracle::all_permutations(k)) {
        const auto expect = oracle::embedding(w, tau);
        const auto got = find_embedding(sigma, Permutation(tau));
        ASSERT_EQ(got.has_value(), expect.has_value());
        if (got) ASSERT_EQ(got->indices, *expect);
      }
      std::set<std::vector<int>> got;
      for (const auto& p : pattern_set(sigma, k)) got.insert(seq(p.images()));
      ASSERT_EQ(got, oracle::pattern_set(w, static_cast<std::size_t>(k)));
    }
  }
}

TEST(GreedyEmbed, EquivalentToContainmentOnFullAlphabet) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(gen() % 6);
    const int n = static_cast<int>(gen() % 11);
    const auto w = random_word(gen, k, n);
    const Word sigma(w, k);
    for (const auto& tau : oracle::all_permutations(k)) {
      const auto g = greedy_embed(sigma, Permutation(tau));
      const auto expect = oracle::greedy(w, tau);
      ASSERT_EQ(g.has_value(), expect.has_value());
      if (g) ASSERT_EQ(g->indices, *expect);
      ASSERT_EQ(g.has_value(), oracle::is_pattern(w, tau));
    }
  }
}

TEST(CircularContains, Examples) {
  EXPECT_TRUE(circular_contains(W({1, 2}), P({2, 1}), false));
  EXPECT_FALSE(circular_contains(W({1, 2, 3}), P({3, 2, 1}), false));
  EXPECT_TRUE(circular_contains(W({1, 2, 3}), P({3, 2, 1}), true));
  EXPECT_TRUE(circular_contains(W({2, 5, 1, 4, 3}), P({3, 1, 2}), false));
}

TEST(CircularContains, MatchesRotationOracle) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 1 + static_cast<int>(gen() % 5);
    const int n = 1 + static_cast<int>(gen() % 7);
    const auto w = random_word(gen, r, n);
    for (const auto& tau : oracle::all_permutations(std::min(r, 3))) {
      bool one = false, two = false;
      for (int i = 0; i < n; ++i) {
        std::vector<int> rot(w.begin() + i, w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + i);
        std::vector<int> rev(rot.rbegin(), rot.rend());
        one = one || oracle::is_pattern(rot, tau);
        two = two || oracle::is_pattern(rot, tau) || oracle::is_pattern(rev, tau);
      }
      ASSERT_EQ(circular_contains(Word(w, r), Permutation(tau), false), one);
      ASSERT_EQ(circular_contains(Word(w, r), Permutation(tau), true), two);
    }
  }
}

TEST(AscentCount, Examples) {
  EXPECT_EQ(ascent_count(P({1, 2, 3})), 2);
  EXPECT_EQ(ascent_count(P({3, 2, 1})), 0);
  EXPECT_EQ(ascent_count(P({1, 3, 2})), 1);
  EXPECT_EQ(ascent_count(P({2, 3, 1})), 1);
}

TEST(AscentCount, ReversalIdentity) {
  for (int k = 1; k <= 7; ++k)
    for_each_permutation(k, [&](const std::vector<int>& p) {
      const Permutation tau(p);
      ASSERT_EQ(ascent_count(tau.reversed()), k - 1 - ascent_count(tau));
    });
}

TEST(RepeatWord, Examples) {
  EXPECT_EQ(repeat_word(3, 2), Word({1, 2, 3, 1, 2, 3}, 3));
  const auto s = pattern_set(repeat_word(3, 2), 3);
  EXPECT_EQ(s.size(), 5u);
  EXPECT_EQ(std::count(s.begin(), s.end(), P({3, 2, 1})), 0);
  EXPECT_TRUE(is_superpattern(repeat_word(3, 3), 3));
}

TEST(RepeatWord, AscentGuarantee) {
  for (int k = 1; k <= 6; ++k) {
    for (int m = 1; m <= k; ++m) {
      const Word w = repeat_word(k, m);
      for_each_permutation(k, [&](const std::vector<int>& p) {
        const Permutation tau(p);
        if (ascent_count(tau) >= k - m) ASSERT_TRUE(is_pattern(w, tau)) << "k=" << k << " m=" << m;
      });
    }
    EXPECT_GE(2 * pattern_count(repeat_word(k, (k + 1) / 2), k), detail::factorial(k));
  }
}

TEST(PatternCount, RelabelingInvariance) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(gen() % 3);
    const auto w = random_word(gen, k, 8);
    std::vector<int> rho(k);
    std::iota(rho.begin(), rho.end(), 1);
    std::shuffle(rho.begin(), rho.end(), gen);
    std::vector<int> relabeled;
    for (int x : w) relabeled.push_back(rho[x - 1]);
    ASSERT_EQ(pattern_count(Word(w, k), k), pattern_count(Word(relabeled, k), k));
  }
}

TEST(FOracle, Examples) {
  EXPECT_EQ(f_oracle(3, 3).max_count, 1u);
  EXPECT_EQ(f_oracle(3, 4).max_count, 2u);
  EXPECT_EQ(f_oracle(3, 9).max_count, 6u);
}

TEST(FOracle, MatchesBruteForce) {
  for (int k = 1; k <= 3; ++k) {
    for (int n = 0; n <= 7; ++n) {
      const auto got = f_oracle(k, n);
      const auto expect = oracle::F(k, n);
      ASSERT_EQ(got.max_count, expect.max_count) << k << "," << n;
      ASSERT_EQ(seq(got.witness.letters()), expect.witness) << k << "," << n;
    }
  }
  const auto got = f_oracle(4, 6);
  const auto expect = oracle::F(4, 6);
  EXPECT_EQ(got.max_count, expect.max_count);
  EXPECT_EQ(seq(got.witness.letters()), expect.witness);
}

TEST(FOracle, Monotone) {
  for (int k = 1; k <= 3; ++k) {
    std::uint64_t prev = 0;
    for (int n = 0; n <= k * k; ++n) {
      const auto c = f_oracle(k, n).max_count;
      EXPECT_GE(c, prev);
      prev = c;
    }
    EXPECT_EQ(f_oracle(k, k).max_count, 1u);
    EXPECT_EQ(f_oracle(k, k * k).max_count, detail::factorial(k));
  }
}

TEST(FOracle, CountingReduction) {
  std::vector<std::vector<std::uint64_t>> F(4, std::vector<std::uint64_t>(9));
  for (int k = 1; k <= 3; ++k)
    for (int n = 0; n <= 8; ++n) F[k][n] = f_oracle(k, n).max_count;
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 400; ++trial) {
    const int r = 1 + static_cast<int>(gen() % 5);
    const int n = static_cast<int>(gen() % 9);
    const Word w(random_word(gen, r, n), r);
    for (int k = 1; k <= std::min(3, r); ++k) {
      const auto bound = static_cast<std::uint64_t>(oracle::binomial(r, k)) * F[k][n];
      ASSERT_LE(pattern_count(w, k), bound);
    }
  }
}

TEST(FOracle, Caps) {
  EXPECT_THROW(f_oracle(5, 5), ResourceError);
  EXPECT_THROW(f_oracle(3, 13), ResourceError);
  EXPECT_THROW(f_oracle(0, 3), DomainError);
}

TEST(ExhaustiveSearch, Examples) {
  EXPECT_EQ(least_superpattern_length(exhaustive_f_search(2, 2, 4)), 3);
  EXPECT_EQ(least_superpattern_length(exhaustive_f_search(3, 3, 4)), std::nullopt);
  EXPECT_EQ(least_superpattern_length(exhaustive_f_search(1, 1, 1)), 1);
  EXPECT_THROW(exhaustive_f_search(3, 10, 8), ResourceError);
}

TEST(ExhaustiveSearch, MatchesBruteForce) {
  for (int k = 1; k <= 3; ++k) {
    for (int r = k; r <= k + 2; ++r) {
      const int n_max = r == 5 ? 6 : 7;
      const auto rows = exhaustive_f_search(k, r, n_max);
      for (const auto& row : rows) {
        const auto expect = oracle::least_superpattern(k, r, row.n);
        ASSERT_EQ(row.exists, expect.has_value()) << k << "," << r << "," << row.n;
        if (row.exists) ASSERT_EQ(seq(row.witness->letters()), *expect);
      }
    }
  }
}

TEST(Caps, ParseOverrides) {
  const Caps c = Caps::parse("max_perm_k=11,max_enumeration=5");
  EXPECT_EQ(c.max_perm_k, 11);
  EXPECT_EQ(c.max_enumeration, 5u);
  EXPECT_THROW(Caps::parse("bogus=1"), DomainError);
  EXPECT_THROW(Caps::parse("max_perm_k"), DomainError);
  EXPECT_THROW(pattern_count(repeat_word(11, 1), 11), ResourceError);
}
