#include "fairdisc/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>

using fairdisc::CounterRng;

TEST(CounterRng, DeterministicAcrossInstances) {
  const CounterRng a(42), b(42);
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t i = 0; i < 16; ++i) EXPECT_EQ(a.at(s, i), b.at(s, i));
}

TEST(CounterRng, OrderIndependent) {
  const CounterRng rng(7);
  const std::uint64_t late = rng.at(3, 1000);
  rng.at(0, 0);
  rng.at(9, 9);
  EXPECT_EQ(rng.at(3, 1000), late);
}

TEST(CounterRng, SeedsAndStreamsDiffer) {
  const CounterRng a(1), b(2);
  std::set<std::uint64_t> words;
  for (std::uint64_t s = 0; s < 8; ++s) {
    words.insert(a.at(s, 0));
    words.insert(b.at(s, 0));
  }
  // 16 draws across seeds and streams should all be distinct words.
  EXPECT_EQ(words.size(), 16u);
}

TEST(CounterRng, CoinIsRoughlyFair) {
  const CounterRng rng(123);
  int heads = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) heads += rng.coin(0, i) ? 1 : 0;
  // 5 sigma on a fair coin with n = 20000 is ~354.
  EXPECT_NEAR(heads, n / 2, 400);
}

TEST(CounterRng, BelowStaysInRangeAndCoversIt) {
  const CounterRng rng(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = rng.below(1, i, 7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(CounterRng, BelowIsRoughlyUniform) {
  const CounterRng rng(99);
  const int bound = 5, n = 50000;
  int counts[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < n; ++i) ++counts[rng.below(2, i, bound)];
  for (int c : counts) {
    // 5 sigma around n/5 with p = 1/5.
    EXPECT_NEAR(c, n / bound, 5 * std::sqrt(n * 0.2 * 0.8));
  }
}

TEST(CounterRng, UnitInHalfOpenInterval) {
  const CounterRng rng(11);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.unit(0, i);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}
