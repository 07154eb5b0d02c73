#include "fairdisc/fairness.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "fairdisc/discrepancy.hpp"
#include "fairdisc/rng.hpp"
#include "oracles.hpp"

using namespace fairdisc;

namespace {

GroupedInstance unit_agent(int m) {
  return GroupedInstance::make(m, {0}, {},
                               {std::vector<long long>(m, 1)});
}

GroupedInstance random_binary_instance(const CounterRng& rng, std::uint64_t job,
                                       int m, int agents, int groups) {
  std::vector<int> group_of(agents);
  std::vector<std::vector<long long>> vals(agents, std::vector<long long>(m));
  for (int i = 0; i < agents; ++i) {
    group_of[i] = i < groups ? i : static_cast<int>(rng.below(job, 900 + i, groups));
    for (int e = 0; e < m; ++e)
      vals[i][e] = rng.coin(job * 64 + i, e) ? 1 : 0;
  }
  return GroupedInstance::make(m, std::move(group_of), {}, std::move(vals));
}

Allocation random_allocation(const CounterRng& rng, std::uint64_t job, int m,
                             int k) {
  std::vector<std::vector<int>> bundles(k);
  for (int e = 0; e < m; ++e)
    bundles[rng.below(job, 400 + e, k)].push_back(e);
  return Allocation::make(m, std::move(bundles));
}

}  // namespace

TEST(CdMinD, UnitValueGoldens) {
  const auto inst = unit_agent(3);
  EXPECT_EQ(cd_min_d(inst, Allocation::make(3, {{0, 1, 2}, {}})), 3);
  EXPECT_EQ(cd_min_d(inst, Allocation::make(3, {{0, 1}, {2}})), 1);
}

TEST(EfMinD, UnitValueGoldens) {
  const auto inst = unit_agent(2);
  EXPECT_EQ(ef_min_d(inst, Allocation::make(2, {{}, {0, 1}})), 2);
  EXPECT_EQ(ef_min_d(inst, Allocation::make(2, {{0, 1}, {}})), 0);
}

TEST(PropMinD, UnitValueGoldens) {
  const auto inst = unit_agent(4);
  EXPECT_EQ(prop_min_d(inst, Allocation::make(4, {{0}, {1, 2, 3}})), 1);
  EXPECT_EQ(prop_min_d(inst, Allocation::make(4, {{0, 1}, {2, 3}})), 0);
}

TEST(MinD, GreedyMatchesSubsetOracle) {
  const CounterRng rng(1234);
  for (std::uint64_t job = 0; job < 500; ++job) {
    const int m = 2 + static_cast<int>(rng.below(job, 1, 7));  // bundles <= 8
    const int k = 2 + static_cast<int>(rng.below(job, 2, 2));
    const int agents = 1 + static_cast<int>(rng.below(job, 3, 3));
    const int groups = std::min(agents, k);
    const auto inst = random_binary_instance(rng, job, m, agents, groups);
    const auto alloc = random_allocation(rng, job, m, k);
    EXPECT_EQ(cd_min_d(inst, alloc), oracle::cd_min_d(inst, alloc)) << job;
    EXPECT_EQ(ef_min_d(inst, alloc), oracle::ef_min_d(inst, alloc)) << job;
    EXPECT_EQ(prop_min_d(inst, alloc), oracle::prop_min_d(inst, alloc)) << job;
  }
}

TEST(IsPredicates, ThresholdBoundary) {
  const CounterRng rng(4321);
  for (std::uint64_t job = 0; job < 200; ++job) {
    const int m = 2 + static_cast<int>(rng.below(job, 1, 5));
    const auto inst = random_binary_instance(rng, job, m, 2, 2);
    const auto alloc = random_allocation(rng, job, m, 2);
    const int dc = cd_min_d(inst, alloc);
    EXPECT_TRUE(is_cd(inst, alloc, dc));
    if (dc > 0) EXPECT_FALSE(is_cd(inst, alloc, dc - 1));
    const int de = ef_min_d(inst, alloc);
    EXPECT_TRUE(is_ef(inst, alloc, de));
    if (de > 0) EXPECT_FALSE(is_ef(inst, alloc, de - 1));
    const int dp = prop_min_d(inst, alloc);
    EXPECT_TRUE(is_prop(inst, alloc, dp));
    if (dp > 0) EXPECT_FALSE(is_prop(inst, alloc, dp - 1));
    // Monotone in d.
    EXPECT_TRUE(is_cd(inst, alloc, dc + 1));
    EXPECT_TRUE(is_ef(inst, alloc, de + 3));
    EXPECT_TRUE(is_prop(inst, alloc, dp + 2));
  }
  EXPECT_THROW(is_cd(unit_agent(2), Allocation::make(2, {{0}, {1}}), -1),
               ParameterError);
}

TEST(PropMinD, ScaleInvariantDecision) {
  const CounterRng rng(999);
  for (std::uint64_t job = 0; job < 100; ++job) {
    const int m = 2 + static_cast<int>(rng.below(job, 1, 5));
    const auto inst = random_binary_instance(rng, job, m, 2, 2);
    const auto alloc = random_allocation(rng, job, m, 2);
    auto vals = inst.valuations;
    for (long long& v : vals[0]) v *= 7;
    const auto scaled =
        GroupedInstance::make(m, inst.group_of, inst.leaders, vals);
    EXPECT_EQ(prop_min_d(inst, alloc), prop_min_d(scaled, alloc));
  }
}

TEST(SingleGroup, EveryAllocationIsEf0AndProp0) {
  const CounterRng rng(808);
  for (std::uint64_t job = 0; job < 50; ++job) {
    const int m = 2 + static_cast<int>(rng.below(job, 1, 5));
    const auto inst = random_binary_instance(rng, job, m, 2, 1);
    std::vector<int> all(m);
    for (int e = 0; e < m; ++e) all[e] = e;
    const auto alloc = Allocation::make(m, {all});
    EXPECT_EQ(ef_min_d(inst, alloc), 0);
    EXPECT_EQ(prop_min_d(inst, alloc), 0);
  }
}

TEST(ExactMinOverAllocations, KnownMinima) {
  // One agent, two unit items, EF: giving her group both items leaves no envy.
  const auto inst = GroupedInstance::make(2, {0}, {}, {{1, 1}});
  const auto ef = exact_min_over_allocations(inst, FairnessNotion::EF,
                                             1'000'000, 2);
  EXPECT_EQ(ef.d, 0);
  EXPECT_EQ(ef_min_d(inst, ef.allocation), 0);

  const auto sys_inst =
      set_system_to_instance(SetSystem::make(3, {{0, 1, 2}}));
  const auto cd = exact_min_over_allocations(sys_inst, FairnessNotion::CD,
                                             1'000'000, 2);
  EXPECT_EQ(cd.d, 1);
}

TEST(ExactMinOverAllocations, MatchesUnprunedOracle) {
  const CounterRng rng(5150);
  for (std::uint64_t job = 0; job < 40; ++job) {
    const int m = 2 + static_cast<int>(rng.below(job, 1, 5));  // up to 6
    const auto inst = random_binary_instance(rng, job, m, 2, 2);
    for (auto notion :
         {FairnessNotion::CD, FairnessNotion::EF, FairnessNotion::PROP}) {
      const auto got = exact_min_over_allocations(inst, notion, 10'000'000, 2);
      EXPECT_EQ(got.d, oracle::min_over_allocations(inst, notion, 2))
          << "job=" << job << " notion=" << notion_name(notion);
      EXPECT_EQ(fairness_min_d(inst, got.allocation, notion), got.d);
    }
  }
}

TEST(ExactMinOverAllocations, LexSmallestTieBreak) {
  // Unit-valued single agent, m=2, k=2, EF optimum 0 is attained by three
  // allocations; bundles compare as sorted lists, so ({0},{1}) precedes
  // ({0,1},{}) and ({1},{0}).
  const auto inst = GroupedInstance::make(2, {0}, {}, {{1, 1}});
  const auto r = exact_min_over_allocations(inst, FairnessNotion::EF,
                                            1'000'000, 2);
  EXPECT_EQ(r.allocation.bundles,
            (std::vector<std::vector<int>>{{0}, {1}}));
}

TEST(ExactMinOverAllocations, CapacityCapRaises) {
  const auto inst = random_binary_instance(CounterRng(1), 0, 20, 2, 2);
  EXPECT_THROW(
      exact_min_over_allocations(inst, FairnessNotion::EF, 1000, 2),
      CapacityError);
}

TEST(SetSystemToInstance, BinaryEncoding) {
  const auto inst = set_system_to_instance(SetSystem::make(3, {{0, 1}}));
  EXPECT_EQ(inst.num_agents(), 1);
  EXPECT_EQ(inst.valuations[0], (std::vector<long long>{1, 1, 0}));
  EXPECT_TRUE(inst.leaders.empty());
}

TEST(Sandwich, CdBetweenDiscAndTwiceDisc) {
  const CounterRng rng(643);
  for (std::uint64_t job = 0; job < 100; ++job) {
    const int m = 2 + static_cast<int>(rng.below(job, 1, 7));  // up to 8
    const int k = 2 + static_cast<int>(rng.below(job, 2, 2));  // 2 or 3
    const int num_sets = 1 + static_cast<int>(rng.below(job, 3, 3));
    std::vector<std::vector<int>> sets(num_sets);
    for (int s = 0; s < num_sets; ++s) {
      for (int e = 0; e < m; ++e)
        if (rng.coin(job * 8 + s, e)) sets[s].push_back(e);
      if (sets[s].empty()) sets[s].push_back(0);
    }
    const auto sys = SetSystem::make(m, sets);
    const Rational d_star = min_discrepancy_exact(sys, k).result.value;
    const auto inst = set_system_to_instance(sys);
    const Rational d_cd(
        exact_min_over_allocations(inst, FairnessNotion::CD, 100'000'000, k).d);
    EXPECT_LE(d_star, d_cd) << "job=" << job;
    EXPECT_LE(d_cd, Rational(2) * d_star) << "job=" << job;
  }
}
