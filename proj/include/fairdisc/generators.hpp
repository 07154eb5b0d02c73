#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "fairdisc/errors.hpp"
#include "fairdisc/quadratic.hpp"
#include "fairdisc/rng.hpp"
#include "fairdisc/types.hpp"

namespace fairdisc {

// Default budget constants. At these values the constructions sit exactly at
// the scale where the existence arguments go through; desk experiments pass
// small constants (e.g. 1) instead.
inline const double kDiscDefaultConstant = 3.0 * std::exp(48.0);
inline const double kEfDefaultConstant = 2.0 * std::exp(124.0);
inline const double kPropDefaultConstant = 2.0 * std::exp(77.0);
inline const double kGroupPropDefaultConstant = 2.0 * std::exp(96.0);

namespace detail {

inline std::string whole(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0Lf", x);
  return buf;
}

inline long long items_or_throw(long double numerator, long double k, double constant_c,
                                const std::string& who, const std::string& knob,
                                long double knob_value, long double per_unit) {
  if (constant_c <= 0) throw ParameterError(who + ": constant_c must be positive");
  const long double items = numerator / (constant_c * logl(k));
  if (items >= 1.0L) return static_cast<long long>(floorl(items));
  // per_unit is the numerator contribution of one knob increment (n or a
  // group size), so this is the smallest knob value yielding an item.
  const long double need =
      ceill(knob_value + (1.0L - items) * constant_c * logl(k) / per_unit);
  throw ParameterError(who + ": zero items at " + knob + "=" + whole(knob_value) +
                       ", k=" + std::to_string(static_cast<long long>(k)) +
                       "; need " + knob + " >= " + whole(need));
}

inline std::vector<long long> balanced_groups(long long n, int k) {
  std::vector<long long> sizes(k, n / k);
  for (int h = 0; h < static_cast<int>(n % k); ++h) ++sizes[h];
  return sizes;
}

inline void check_group_sizes(const std::vector<long long>& sizes, long long n, int k,
                              const std::string& who) {
  if (static_cast<int>(sizes.size()) != k)
    throw DimensionError(who + ": " + std::to_string(sizes.size()) +
                         " group sizes for k=" + std::to_string(k));
  long long total = 0;
  for (std::size_t h = 0; h < sizes.size(); ++h) {
    if (sizes[h] < 1)
      throw ValidationError(who + ": group " + std::to_string(h) + " is empty");
    total += sizes[h];
  }
  if (total != n)
    throw DimensionError(who + ": group sizes total " + std::to_string(total) +
                         ", expected n=" + std::to_string(n));
}

// Agents laid out group by group, the first agent of each group being the
// leader (all-ones row); followers draw fair coins, one per item, on the
// agent's own stream.
inline GroupedInstance coin_instance(long long m, const std::vector<long long>& sizes,
                                     std::uint64_t seed) {
  const CounterRng rng(seed);
  std::vector<int> group_of;
  std::vector<int> leaders;
  std::vector<std::vector<long long>> rows;
  int agent = 0;
  for (int h = 0; h < static_cast<int>(sizes.size()); ++h) {
    for (long long j = 0; j < sizes[h]; ++j, ++agent) {
      group_of.push_back(h);
      std::vector<long long> row(m);
      if (j == 0) {
        leaders.push_back(agent);
        for (auto& v : row) v = 1;
      } else {
        for (long long e = 0; e < m; ++e) row[e] = rng.coin(agent, e) ? 1 : 0;
      }
      rows.push_back(std::move(row));
    }
  }
  return GroupedInstance::make(static_cast<int>(m), std::move(group_of),
                               std::move(leaders), std::move(rows));
}

}  // namespace detail

struct DiscConstruction {
  SetSystem system;
  long long m = 0;
  int k = 0;
  Quadratic d;  // sqrt(m/k), the deviation the construction defeats
};

// Random set system: S_0 is the whole universe of m = floor((n-1)k / (c ln k))
// elements; S_1..S_{n-1} include each element independently with probability
// 1/2 (set i draws on stream i).
inline DiscConstruction gen_disc_system(long long n, int k, double constant_c,
                                        std::uint64_t seed) {
  if (k < 2) throw ParameterError("gen disc: k must be >= 2");
  if (n < 2) throw ParameterError("gen disc: n must be >= 2");
  const long long m = detail::items_or_throw(
      static_cast<long double>(n - 1) * k, k, constant_c, "gen disc", "n",
      static_cast<long double>(n), static_cast<long double>(k));
  const CounterRng rng(seed);
  std::vector<std::vector<int>> sets(n);
  for (long long e = 0; e < m; ++e) sets[0].push_back(static_cast<int>(e));
  for (long long i = 1; i < n; ++i)
    for (long long e = 0; e < m; ++e)
      if (rng.coin(i, e)) sets[i].push_back(static_cast<int>(e));
  DiscConstruction out{SetSystem::make(static_cast<int>(m), std::move(sets)), m, k,
                       Quadratic::root(Rational(m, k))};
  return out;
}

struct FairConstruction {
  GroupedInstance instance;
  long long m = 0;
  int k = 0;
  Quadratic d;
  bool below_theorem_k = false;  // group-share construction with k < 4
};

// Leader/follower instance with m = floor((n-k) / (c ln k)) items, one leader
// per group, followers drawing fair-coin values; no-envy arguments defeat
// deviations up to d = sqrt(m/k). Groups default to balanced sizes.
inline FairConstruction gen_ef_instance(long long n, int k, double constant_c,
                                        std::uint64_t seed,
                                        std::vector<long long> group_sizes = {}) {
  if (k < 2) throw ParameterError("gen ef: k must be >= 2");
  if (n < k + 1) throw ParameterError("gen ef: n must be >= k+1");
  if (group_sizes.empty()) group_sizes = detail::balanced_groups(n, k);
  detail::check_group_sizes(group_sizes, n, k, "gen ef");
  const long long m =
      detail::items_or_throw(static_cast<long double>(n - k), k, constant_c, "gen ef",
                             "n", static_cast<long double>(n), 1.0L);
  return {detail::coin_instance(m, group_sizes, seed), m, k,
          Quadratic::root(Rational(m, k)), false};
}

// Same construction; the share arguments defeat deviations up to
// d = sqrt(m/k^3).
inline FairConstruction gen_prop_instance(long long n, int k, double constant_c,
                                          std::uint64_t seed,
                                          std::vector<long long> group_sizes = {}) {
  if (k < 2) throw ParameterError("gen prop: k must be >= 2");
  if (n < k + 1) throw ParameterError("gen prop: n must be >= k+1");
  if (group_sizes.empty()) group_sizes = detail::balanced_groups(n, k);
  detail::check_group_sizes(group_sizes, n, k, "gen prop");
  const long long m =
      detail::items_or_throw(static_cast<long double>(n - k), k, constant_c,
                             "gen prop", "n", static_cast<long double>(n), 1.0L);
  return {detail::coin_instance(m, group_sizes, seed), m, k,
          Quadratic::root(Rational(static_cast<long long>(m), static_cast<long long>(k) * k * k)),
          false};
}

// Group-share construction: m = floor((min group size - 1) k / (c ln k)),
// d = sqrt(m/k). Works for k >= 2; the supporting argument needs k >= 4, so
// smaller k is permitted but flagged.
inline FairConstruction gen_propnew_instance(const std::vector<long long>& group_sizes,
                                             double constant_c, std::uint64_t seed) {
  const int k = static_cast<int>(group_sizes.size());
  if (k < 2) throw ParameterError("gen propnew: needs at least two groups");
  long long n = 0, min_size = group_sizes[0];
  for (std::size_t h = 0; h < group_sizes.size(); ++h) {
    if (group_sizes[h] < 1)
      throw ValidationError("gen propnew: group " + std::to_string(h) + " is empty");
    n += group_sizes[h];
    min_size = std::min(min_size, group_sizes[h]);
  }
  const long long m = detail::items_or_throw(
      static_cast<long double>(min_size - 1) * k, k, constant_c, "gen propnew",
      "min group size", static_cast<long double>(min_size), static_cast<long double>(k));
  return {detail::coin_instance(m, group_sizes, seed), m, k,
          Quadratic::root(Rational(m, k)), k < 4};
}

}  // namespace fairdisc
