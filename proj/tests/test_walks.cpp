#include <gtest/gtest.h>

#include <map>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.hpp"
#include "superpat/superpat.hpp"

using namespace superpat;

namespace {

std::vector<int> seq(std::span<const int> xs) { return {xs.begin(), xs.end()}; }

std::vector<WeightedDfa> sample_k_dfas(int k, int count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<WeightedDfa> out;
  out.push_back(SubsetDfa(k).materialize());
  for (int i = 0; i < count; ++i) out.push_back(random_k_dfa(k, 1 + static_cast<std::uint32_t>(gen() % 8), gen()));
  std::uniform_int_distribution<int> d(1, k);
  for (int i = 0; i < count; ++i) {
    std::vector<int> w(2 * k);
    for (auto& x : w) x = d(gen);
    out.push_back(cheapen(build_greedy_dfa(Word(w, k))));
  }
  return out;
}

}  // namespace

TEST(PermutationalWord, Validates) {
  EXPECT_THROW(PermutationalWord({1, 1}, 3), DomainError);
  EXPECT_THROW(PermutationalWord({4}, 3), DomainError);
  EXPECT_THROW(PermutationalWord({1, 2, 3, 4}, 3), DomainError);
}

TEST(SamplePermWord, Examples) {
  KeyedRng rng(1, 0);
  EXPECT_EQ(sample_perm_word(5, 0, rng).size(), 0u);
  auto w = seq(sample_perm_word(3, 3, rng).letters());
  std::sort(w.begin(), w.end());
  EXPECT_EQ(w, (std::vector<int>{1, 2, 3}));
  EXPECT_THROW(sample_perm_word(3, 4, rng), DomainError);
}

TEST(SamplePermWord, UniformChiSquare) {
  std::map<std::vector<int>, std::uint64_t> counts;
  const std::uint64_t n = 1'000'000;
  for (std::uint64_t i = 0; i < n; ++i) {
    KeyedRng rng(2024, i);
    ++counts[seq(sample_perm_word(5, 3, rng).letters())];
  }
  ASSERT_EQ(counts.size(), 60u);
  const double expect = static_cast<double>(n) / 60;
  double chi = 0;
  for (const auto& [w, c] : counts) chi += (c - expect) * (c - expect) / expect;
  const boost::math::chi_squared dist(59);
  EXPECT_GT(1 - boost::math::cdf(dist, chi), 0.001);
}

TEST(Restriction, Examples) {
  const PermutationalWord w({2, 1, 3}, 3);
  EXPECT_EQ(seq(restriction(w, {1, 3}).letters()), (std::vector<int>{2, 3}));
  EXPECT_EQ(restriction(w, {}).size(), 0u);
  EXPECT_THROW(restriction(w, {4}), DomainError);
}

TEST(Restriction, UniformOverInjectiveWords) {
  for (int k = 1; k <= 5; ++k) {
    for (int L = 0; L <= std::min(k, 4); ++L) {
      std::vector<std::vector<int>> inputs;
      for (const auto& p : oracle::all_permutations(k))
        if (std::is_sorted(p.begin() + L, p.end())) inputs.emplace_back(p.begin(), p.begin() + L);
      for (std::size_t size = 0; size <= static_cast<std::size_t>(L); ++size) {
        for (const auto& E : oracle::index_subsets(static_cast<std::size_t>(L), size)) {
          std::map<std::vector<int>, std::uint64_t> counts;
          for (const auto& w : inputs) ++counts[seq(restriction(PermutationalWord(w, k), E).letters())];
          ASSERT_EQ(counts.size(), oracle::falling(k, static_cast<int>(size)));
          for (const auto& [r, c] : counts) ASSERT_EQ(c, inputs.size() / counts.size());
        }
      }
    }
  }
}

TEST(ExactP, Examples) {
  const SubsetDfa s(3);
  const auto p = exact_P(s, 0, 3, 1e-9);
  EXPECT_EQ(p.count, 3u);
  EXPECT_EQ(p.total, 6u);
  EXPECT_DOUBLE_EQ(p.value(), 0.5);
  EXPECT_EQ(exact_P(s, 0, 0, 0.2).count, 0u);
  EXPECT_EQ(exact_P(s, 0, 0, 0.2, Comparator::LessEqual).count, 1u);
  EXPECT_EQ(exact_P(s, 0, 3, 0.5).count, 0u);
  EXPECT_THROW(exact_P(build_greedy_dfa(Word({1, 2}, 2)), 0, 1, 0.1), DomainError);
  EXPECT_THROW(exact_P(s, 0, 4, 0.1), DomainError);
}

TEST(ExactP, MatchesPermutationOracle) {
  for (int k = 1; k <= 6; ++k) {
    for (const auto& a : sample_k_dfas(k, 3, static_cast<std::uint64_t>(k))) {
      for (std::uint32_t v = 0; v < std::min<std::uint64_t>(a.state_count(), 4); ++v) {
        for (int L = 0; L <= k; ++L) {
          for (const auto [num, den] : {std::pair{0, 1}, std::pair{1, 10}, std::pair{1, 4}, std::pair{2, 5},
                                        std::pair{1, 3}, std::pair{1, 20}}) {
            const double eps = static_cast<double>(num) / den;
            for (bool strict : {true, false}) {
              const auto got = exact_P(a, v, L, eps, strict ? Comparator::Less : Comparator::LessEqual);
              ASSERT_EQ(got.count, oracle::cheap_word_count(a, v, L, num, den, strict))
                  << "k=" << k << " L=" << L << " eps=" << eps << " strict=" << strict;
              ASSERT_EQ(got.total, oracle::falling(k, L));
            }
          }
        }
      }
    }
  }
}

TEST(ExactP, MaxOverStates) {
  const auto a = random_k_dfa(5, 6, 3);
  const auto [best, arg] = exact_P_max(a, 3, 0.1);
  for (std::uint32_t v = 0; v < a.state_count(); ++v) EXPECT_LE(exact_P(a, v, 3, 0.1).count, best.count);
  EXPECT_EQ(exact_P(a, arg, 3, 0.1).count, best.count);
}

TEST(ExactP, CapsEnumeration) {
  EXPECT_THROW(exact_P(SubsetDfa(12), 0, 12, 0.1), ResourceError);
  Caps big;
  big.max_enumeration = 1'000'000'000;
  EXPECT_NO_THROW(exact_P(SubsetDfa(8), 0, 8, 0.1, Comparator::Less, big));
}

TEST(EstimateP, DeterministicAcrossThreads) {
  const auto a = random_k_dfa(6, 5, 1);
  const auto r1 = estimate_P(a, 0, 4, 0.1, 20000, 42, Comparator::Less, 1);
  const auto r2 = estimate_P(a, 0, 4, 0.1, 20000, 42, Comparator::Less, 7);
  const auto r3 = estimate_P(a, 0, 4, 0.1, 20000, 42, Comparator::Less, 1);
  EXPECT_EQ(r1.successes, r2.successes);
  EXPECT_EQ(r1.successes, r3.successes);
  EXPECT_EQ(r1.ci_low, r2.ci_low);
  EXPECT_NE(r1.successes, estimate_P(a, 0, 4, 0.1, 20000, 43).successes);
}

TEST(EstimateP, IntervalCoversExactValue) {
  const SubsetDfa s(3);
  const auto r = estimate_P(s, 0, 3, 1e-9, 100000, 9, Comparator::Less, 4);
  EXPECT_LE(r.ci_low, 0.5);
  EXPECT_GE(r.ci_high, 0.5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = random_k_dfa(6, 4, seed);
    const double exact = exact_P(a, 0, 5, 0.05).value();
    const auto e = estimate_P(a, 0, 5, 0.05, 50000, seed, Comparator::Less, 4);
    EXPECT_LE(e.ci_low, exact);
    EXPECT_GE(e.ci_high, exact);
  }
}

TEST(EstimateP, BelowForLBound) {
  const SubsetDfa s(8);
  const auto r = estimate_P(s, 0, 8, 0.1, 1'000'000, 5, Comparator::Less, 8);
  EXPECT_LE(r.ci_low, forL_bound(8, 8, 0.1).value());
}

TEST(ClopperPearson, KnownValues) {
  const auto ci = clopper_pearson(0, 10, 0.99);
  EXPECT_DOUBLE_EQ(ci.low, 0.0);
  EXPECT_NEAR(ci.high, 1 - std::pow(0.005, 0.1), 1e-12);
  const auto full = clopper_pearson(10, 10, 0.99);
  EXPECT_NEAR(full.low, std::pow(0.005, 0.1), 1e-12);
  EXPECT_DOUBLE_EQ(full.high, 1.0);
  EXPECT_THROW(clopper_pearson(3, 2), DomainError);
}

TEST(Decompose, Examples) {
  const SubsetDfa s(3);
  const std::vector<int> tau = {3, 2, 1};
  const auto d = xy_decompose(s, tau);
  EXPECT_EQ(d.C, (std::vector<std::uint64_t>{3, 2, 1}));
  EXPECT_EQ(d.X, (std::vector<std::uint64_t>{3, 2, 1}));
  EXPECT_EQ(d.Y, (std::vector<std::uint64_t>{0, 0, 0}));
  const auto b = cheapen(build_greedy_dfa(Word({1, 2, 3, 2}, 3)));
  const std::vector<int> id = {1, 2, 3};
  const auto e = xy_decompose(b, id);
  for (auto y : e.Y) EXPECT_GE(y, 0u);
  EXPECT_EQ(e.total, walk_cost(b, 0, id).total.value());
  EXPECT_THROW(xy_decompose(build_greedy_dfa(Word({1, 2, 3, 2}, 3)), id), DomainError);
}

TEST(Decompose, Invariants) {
  for (int k = 1; k <= 6; ++k) {
    for (const auto& a : sample_k_dfas(k, 2, 10 + static_cast<std::uint64_t>(k))) {
      for (const auto& tau : oracle::all_permutations(k)) {
        const auto d = xy_decompose(a, tau);
        ASSERT_EQ(seq(std::vector<int>(d.X.begin(), d.X.end())), oracle::x_values(a, tau));
        std::uint64_t sum = 0;
        for (int j = 0; j < k; ++j) {
          ASSERT_EQ(d.C[j], d.X[j] + d.Y[j]);
          ASSERT_GE(d.X[j], 1u);
          ASSERT_LE(d.X[j], static_cast<std::uint64_t>(k - j));
          ASSERT_EQ(d.S_size[j], static_cast<std::uint64_t>(k - j));
          sum += d.C[j];
        }
        ASSERT_EQ(sum, d.total);
        ASSERT_EQ(ExtCost(d.total), walk_cost(a, a.root(), tau).total);
      }
    }
  }
}

TEST(Decompose, SubsetDfaHasNoSlack) {
  for (int k = 1; k <= 7; ++k) {
    const SubsetDfa s(k);
    for_each_permutation(k, [&](const std::vector<int>& tau) { ASSERT_EQ(xy_decompose(s, tau).sum_y(), 0u); });
  }
}

TEST(XStatistics, UniformIndependentAndMean) {
  for (int k = 1; k <= 5; ++k) {
    for (const auto& a : sample_k_dfas(k, 2, 20 + static_cast<std::uint64_t>(k))) {
      std::map<std::vector<int>, std::uint64_t> joint;
      std::uint64_t sum = 0;
      for (const auto& tau : oracle::all_permutations(k)) {
        const auto x = oracle::x_values(a, tau);
        ++joint[x];
        sum += std::accumulate(x.begin(), x.end(), 0ull);
      }
      // k! permutations and k! points in the product of [k], [k-1], ..., [1]:
      // independence with uniform marginals means every point appears once.
      ASSERT_EQ(joint.size(), oracle::factorial(k));
      for (const auto& [x, c] : joint) ASSERT_EQ(c, 1u);
      // X_j uniform on [k-j+1] has mean (k-j+2)/2, so the sum has mean (k^2+3k)/4.
      ASSERT_EQ(4 * sum, oracle::factorial(k) * static_cast<std::uint64_t>(k * k + 3 * k));
    }
  }
  const auto a = random_k_dfa(6, 5, 1);
  std::uint64_t sum = 0;
  for (const auto& tau : oracle::all_permutations(6)) sum += xy_decompose(a, tau).sum_x();
  EXPECT_EQ(4 * sum, 720u * 54u);
  // (k^2+k)/4 is the mean for uniforms on {0..k-j} shifted by k/2, which is
  // k/2 below the mean for uniforms on [k-j+1].
  EXPECT_NE(4 * sum, 720u * 42u);
}

TEST(XStatistics, MonteCarloMean) {
  const auto a = random_k_dfa(30, 10, 3);
  const auto r = x_sum_experiment(a, (0.25 - 0.1) * 900, 20000, 17, 4);
  const double mean = (30.0 * 30 + 3 * 30) / 4;
  const double sigma = std::sqrt(r.variance() / static_cast<double>(r.samples));
  EXPECT_NEAR(r.mean(), mean, 3 * sigma);
  EXPECT_EQ(r.at_most_threshold, x_sum_experiment(a, (0.25 - 0.1) * 900, 20000, 17, 1).at_most_threshold);
}

TEST(Doubling, ExactInequality) {
  for (int k = 2; k <= 6; ++k) {
    for (const auto& a : sample_k_dfas(k, 2, 30 + static_cast<std::uint64_t>(k))) {
      for (int L = 1; L <= k; ++L) {
        for (int M = 1; M * L <= k; ++M) {
          for (double eps : {0.05, 0.2}) {
            const auto big = exact_P_max(a, M * L, eps).first;
            const auto small = exact_P_max(a, L, eps).first;
            // P(ML) <= M |V| P(L), cross-multiplied over the exact denominators.
            const auto lhs = boost::multiprecision::cpp_int(big.count) * small.total;
            const auto rhs = boost::multiprecision::cpp_int(M) * a.state_count() * small.count * big.total;
            ASSERT_LE(lhs, rhs) << "k=" << k << " L=" << L << " M=" << M;
          }
        }
      }
    }
  }
}

TEST(PrefixMonotonicity, RootWalks) {
  for (const auto& a : sample_k_dfas(6, 3, 40)) {
    for (const auto& tau : oracle::all_permutations(6)) {
      ExtCost prev{0};
      for (int len = 0; len <= 6; ++len) {
        const auto c = walk_cost(a, a.root(), std::span<const int>(tau.data(), len)).total;
        ASSERT_LE(prev, c);
        prev = c;
      }
    }
  }
}

TEST(TStatistic, Examples) {
  const SubsetDfa s(3);
  EXPECT_EQ(collision_count(s, 0, std::vector<int>{}, 3), 0u);
  EXPECT_EQ(collision_count(s, 0, std::vector<int>{3}, 3), 1u);
  EXPECT_EQ(collision_count(s, 0, std::vector<int>{3}, 0), 0u);
  const auto t = t_statistic(s, std::vector<int>{3}, 3);
  EXPECT_EQ(t.per_state.size(), 8u);
  EXPECT_EQ(t.per_state[0], 1u);
  EXPECT_EQ(t.min, 1u);
  for (std::uint64_t x = 0; x <= 3; ++x) EXPECT_EQ(t_statistic(s, std::vector<int>{}, x).min, 0u);
}

TEST(TStatistic, MatchesDefinition) {
  std::mt19937_64 gen(50);
  for (const auto& a : sample_k_dfas(5, 3, 51)) {
    for (int trial = 0; trial < 30; ++trial) {
      auto p = oracle::all_permutations(5)[gen() % 120];
      p.resize(gen() % 6);
      for (std::uint64_t x = 0; x <= 5; ++x) {
        const auto t = t_statistic(a, p, x);
        std::uint64_t mn = UINT64_MAX;
        for (std::uint32_t v = 0; v < a.state_count(); ++v) {
          const auto c = oracle::collisions(a, v, p, x);
          ASSERT_EQ(t.per_state[v], c);
          mn = std::min(mn, c);
        }
        ASSERT_EQ(t.min, mn);
      }
    }
  }
}

TEST(TStatistic, SubsetHintIsExactMinimum) {
  for (int k = 1; k <= 7; ++k) {
    const SubsetDfa s(k);
    std::mt19937_64 gen(static_cast<std::uint64_t>(k));
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<int> p(k);
      std::iota(p.begin(), p.end(), 1);
      std::shuffle(p.begin(), p.end(), gen);
      p.resize(gen() % (k + 1));
      std::uint64_t mask = 0;
      for (int t : p) mask |= std::uint64_t{1} << (t - 1);
      for (std::uint64_t x = 0; x <= static_cast<std::uint64_t>(k); ++x) {
        const auto t = t_statistic(s, p, x);
        const auto at_hint = collision_count(s, s.min_collision_state(mask), p, x);
        ASSERT_EQ(t.min, at_hint);
        const auto slack = static_cast<std::int64_t>(x) - (k - static_cast<std::int64_t>(p.size()));
        ASSERT_EQ(t.min, static_cast<std::uint64_t>(std::max<std::int64_t>(0, slack)));
      }
    }
  }
}

TEST(TStatistic, BoundsSlackAlongWalk) {
  for (int k = 2; k <= 5; ++k) {
    for (const auto& a : sample_k_dfas(k, 2, 60 + static_cast<std::uint64_t>(k))) {
      for (const auto& tau : oracle::all_permutations(k)) {
        const auto d = xy_decompose(a, tau);
        const auto states = walk_cost(a, a.root(), tau).states;
        for (int j = 1; j <= k; ++j) {
          const std::vector<int> prefix(tau.begin(), tau.begin() + (j - 1));
          const auto v = states[j - 1];
          ASSERT_EQ(d.Y[j - 1], collision_count(a, v, prefix, d.C[j - 1]));
          ASSERT_GE(d.Y[j - 1], collision_count(a, v, prefix, d.X[j - 1]));
          ASSERT_GE(collision_count(a, v, prefix, d.X[j - 1]), t_statistic(a, prefix, d.X[j - 1]).min);
        }
      }
    }
  }
}

TEST(Concentration, FrequenciesAndRootComparison) {
  const SubsetDfa s(12);
  const auto r = concentration_experiment(s, 4, 0.3, 3000, 8, 4);
  ASSERT_EQ(r.cells.size(), 9u);
  EXPECT_DOUBLE_EQ(r.c_con1, 0.0028125);
  for (const auto& c : r.cells) {
    for (auto e : {c.con1_events, c.con2_events, c.con2_root_events}) {
      EXPECT_GE(r.frequency(e), 0.0);
      EXPECT_LE(r.frequency(e), 1.0);
    }
    // The state minimum never exceeds the root value, so a shortfall at the
    // root implies a shortfall of the minimum.
    EXPECT_LE(c.con2_root_events, c.con2_events);
  }
}

TEST(Concentration, HintAgreesWithEnumerationAndThreads) {
  const SubsetDfa s(8);
  const auto m = s.materialize();
  const auto a = concentration_experiment(s, 4, 0.3, 2000, 5, 1);
  const auto b = concentration_experiment(m, 4, 0.3, 2000, 5, 3);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].con1_events, b.cells[i].con1_events);
    EXPECT_EQ(a.cells[i].con2_events, b.cells[i].con2_events);
    EXPECT_EQ(a.cells[i].con2_root_events, b.cells[i].con2_root_events);
  }
}

TEST(Concentration, RandomDfaAndValidation) {
  const auto a = random_k_dfa(10, 6, 2);
  const auto r = concentration_experiment(a, 3, 0.2, 500, 1, 2);
  for (const auto& c : r.cells) EXPECT_LE(c.con2_root_events, c.con2_events);
  EXPECT_THROW(concentration_experiment(a, 1, 0.2, 10, 1), DomainError);
  EXPECT_THROW(concentration_experiment(a, 3, 0.2, 0, 1), DomainError);
}

TEST(KeyedRng, StreamsAreIndependentOfOrder) {
  KeyedRng a(1, 5), b(1, 5), c(1, 6);
  EXPECT_EQ(a(), b());
  EXPECT_NE(KeyedRng(1, 5)(), c());
  for (int i = 0; i < 1000; ++i) EXPECT_LT(a.below(7), 7u);
}
