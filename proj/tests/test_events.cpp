#include "fairdisc/events.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fairdisc/rng.hpp"

using namespace fairdisc;

TEST(EventProbDisc, DegenerateClassSizes) {
  // An empty class counts 0, which is below any positive threshold.
  EXPECT_EQ(event_prob_disc(0, 40, 2, Rational(1), TailSide::Low), Rational(1));
  EXPECT_EQ(event_prob_disc(0, 40, 2, Rational(1), TailSide::High),
            Rational(0));
}

TEST(EventProbDisc, ExactTails) {
  // m=40, k=2, d=1: threshold 10 - 1 = 9, so Pr[X < 9] = Pr[X <= 8].
  EXPECT_EQ(event_prob_disc(10, 40, 2, Rational(1), TailSide::Low),
            Rational(1013, 1024));
  // m=20, k=2, d=1: Pr[X > 6] = Pr[X >= 7].
  EXPECT_EQ(event_prob_disc(10, 20, 2, Rational(1), TailSide::High),
            Rational(11, 64));
}

TEST(EventProbDisc, StrictThresholdSemantics) {
  // Integer threshold: the strict event excludes the threshold itself.
  // m=40, k=2, d=2: Pr[X < 8] = Pr[X <= 7].
  EXPECT_EQ(event_prob_disc(10, 40, 2, Rational(2), TailSide::Low),
            binom_tail_le(10, 7));
  // Fractional threshold 8.5 rounds to the nearest support point below.
  EXPECT_EQ(event_prob_disc(10, 40, 2, Rational(3, 2), TailSide::Low),
            binom_tail_le(10, 8));
}

TEST(EventProbDisc, ParameterErrors) {
  EXPECT_THROW(event_prob_disc(11, 10, 2, Rational(1), TailSide::Low),
               ParameterError);
  EXPECT_THROW(event_prob_disc(-1, 10, 2, Rational(1), TailSide::Low),
               ParameterError);
  EXPECT_THROW(event_prob_disc(1, 0, 2, Rational(1), TailSide::Low),
               ParameterError);
}

TEST(DeviationPair, ConcreteWitness) {
  // m=20, k=4, whole-universe set; color 0 counts 1 < 2.5 - 1 and color 2
  // counts 8 > 2.5 + 1.
  std::vector<int> all(20);
  for (int e = 0; e < 20; ++e) all[e] = e;
  const auto s = SetSystem::make(20, {all});
  std::vector<int> chi(20, 1);
  chi[0] = 0;
  for (int e = 1; e <= 8; ++e) chi[e] = 2;
  for (int e = 15; e < 20; ++e) chi[e] = 3;
  const auto coloring = Coloring::make(4, chi);
  EXPECT_TRUE(deviation_pair_check(coloring, s, 4, Rational(1), 0, 0, 2));
}

TEST(DeviationPair, PreconditionErrors) {
  std::vector<int> all(20);
  for (int e = 0; e < 20; ++e) all[e] = e;
  const auto s = SetSystem::make(20, {all});
  const auto balanced = Coloring::make(4, std::vector<int>{
      0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3});
  // Balanced counts violate both tail events.
  EXPECT_THROW(deviation_pair_check(balanced, s, 4, Rational(1), 0, 0, 2),
               PreconditionError);
  // Colors must come from opposite halves of the palette.
  EXPECT_THROW(deviation_pair_check(balanced, s, 4, Rational(1), 0, 2, 3),
               PreconditionError);
  EXPECT_THROW(deviation_pair_check(balanced, s, 4, Rational(1), 0, 0, 1),
               PreconditionError);
  EXPECT_THROW(deviation_pair_check(balanced, s, 2, Rational(1), 0, 0, 1),
               DimensionError);
  EXPECT_THROW(deviation_pair_check(balanced, s, 4, Rational(1), 3, 0, 2),
               ParameterError);
}

TEST(DeviationPair, RandomWitnessesAlwaysExceedD) {
  // Whenever both tail events hold on concrete data the discrepancy must
  // exceed d; scan random colorings for event-satisfying witnesses.
  const int m = 20, k = 4;
  std::vector<int> all(m);
  for (int e = 0; e < m; ++e) all[e] = e;
  const auto s = SetSystem::make(m, {all});
  const Rational d(1);
  const Rational mean(m, 2 * k);
  const CounterRng rng(31337);
  int witnesses = 0;
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    std::vector<int> chi(m);
    for (int e = 0; e < m; ++e)
      chi[e] = static_cast<int>(rng.below(trial, e, k));
    const auto coloring = Coloring::make(k, chi);
    long long count[4] = {0, 0, 0, 0};
    for (int e = 0; e < m; ++e) ++count[chi[e]];
    for (int lo = 0; lo < k / 2; ++lo)
      for (int hi = k / 2; hi < k; ++hi) {
        if (!(Rational(count[lo]) < mean - d)) continue;
        if (!(Rational(count[hi]) > mean + d)) continue;
        EXPECT_TRUE(deviation_pair_check(coloring, s, k, d, 0, lo, hi));
        ++witnesses;
      }
  }
  EXPECT_GT(witnesses, 10);
}

TEST(EstimateEventRate, MatchesExactClassProbability) {
  // Color class {0..4} inside a fresh random set: the intersection count is
  // Binomial(5, 1/2), so the low event at d=1/2 has probability
  // Pr[X <= 2] = 1/2.
  GeneratorSpec gen;
  gen.family = GeneratorSpec::Family::Disc;
  gen.n = 5;
  gen.k = 2;
  gen.constant_c = 1.0;  // m = 11

  EventQuery q;
  q.kind = EventQuery::Kind::ClassLow;
  q.d = Quadratic(Rational(1, 2), Rational(0));
  std::vector<int> chi(11, 1);
  for (int e = 0; e < 5; ++e) chi[e] = 0;
  q.coloring = Coloring::make(2, chi);
  q.set_index = 1;
  q.color = 0;

  const Rational p = event_prob_disc(5, 11, 2, Rational(1, 2), TailSide::Low);
  EXPECT_EQ(p, Rational(1, 2));

  const long long trials = 2000;
  const auto est = estimate_event_rate(gen, q, trials, 99);
  const double sigma = std::sqrt(0.25 / static_cast<double>(trials));
  EXPECT_NEAR(est.rate, p.to_double(), 4 * sigma);
  EXPECT_NEAR(est.ci_halfwidth, 1.96 * sigma, 0.01);
}

TEST(EstimateEventRate, MatchesExactRivalProbability) {
  // Follower agent 1 vs a 3-item rival bundle: v(rival) ~ Binomial(3, 1/2),
  // Pr[v >= 3/2] = Pr[v >= 2] = 1/2.
  GeneratorSpec gen;
  gen.family = GeneratorSpec::Family::Ef;
  gen.n = 6;
  gen.k = 2;
  gen.constant_c = 1.0;  // m = 5

  EventQuery q;
  q.kind = EventQuery::Kind::RivalAtLeastHalf;
  q.d = Quadratic(Rational(1), Rational(0));
  q.allocation = Allocation::make(5, {{0, 1}, {2, 3, 4}});
  q.agent = 1;
  q.rival_bundle = 1;

  const auto est = estimate_event_rate(gen, q, 2000, 7);
  EXPECT_NEAR(est.rate, 0.5, 4 * std::sqrt(0.25 / 2000.0));
}

TEST(EstimateEventRate, DeterministicUnderSeed) {
  GeneratorSpec gen;
  gen.family = GeneratorSpec::Family::Disc;
  gen.n = 5;
  gen.k = 2;
  gen.constant_c = 1.0;

  EventQuery q;
  q.kind = EventQuery::Kind::ClassHigh;
  q.d = Quadratic(Rational(1), Rational(0));
  std::vector<int> chi(11, 0);
  for (int e = 5; e < 11; ++e) chi[e] = 1;
  q.coloring = Coloring::make(2, chi);
  q.set_index = 2;
  q.color = 1;

  const auto a = estimate_event_rate(gen, q, 500, 42);
  const auto b = estimate_event_rate(gen, q, 500, 42);
  EXPECT_EQ(a.rate, b.rate);
  const auto c = estimate_event_rate(gen, q, 500, 43);
  // Different seed resamples; rates may coincide but usually do not.
  EXPECT_NEAR(c.rate, a.rate, 0.2);
}

TEST(EstimateEventRate, ValidatesTrialCountAndFamilies) {
  GeneratorSpec gen;
  gen.family = GeneratorSpec::Family::Disc;
  gen.n = 5;
  gen.k = 2;
  gen.constant_c = 1.0;

  EventQuery q;
  q.kind = EventQuery::Kind::ClassLow;
  q.d = Quadratic(Rational(1), Rational(0));
  std::vector<int> chi(11, 0);
  q.coloring = Coloring::make(2, chi);
  q.set_index = 1;

  EXPECT_THROW(estimate_event_rate(gen, q, 0, 1), PreconditionError);
  EXPECT_THROW(estimate_event_rate(gen, q, 99, 1), PreconditionError);

  q.kind = EventQuery::Kind::OwnBelowShare;
  EXPECT_THROW(estimate_event_rate(gen, q, 100, 1), ParameterError);

  gen.family = GeneratorSpec::Family::Ef;
  gen.n = 6;
  q.kind = EventQuery::Kind::ClassLow;
  EXPECT_THROW(estimate_event_rate(gen, q, 100, 1), ParameterError);
}
