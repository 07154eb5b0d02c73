#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fairdisc/errors.hpp"

namespace fairdisc {

// Finite set system over the universe {0, ..., universe_size-1}.
// Sets are stored sorted ascending; duplicates within a set are rejected.
// Instances are immutable after construction: build them with make().
struct SetSystem {
  int universe_size = 0;
  std::vector<std::vector<int>> sets;

  static SetSystem make(int universe_size, std::vector<std::vector<int>> sets) {
    if (universe_size <= 0)
      throw ValidationError("set system: universe_size must be positive");
    if (sets.empty()) throw ValidationError("set system: needs at least one set");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      auto& s = sets[i];
      std::sort(s.begin(), s.end());
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] < 0 || s[j] >= universe_size)
          throw ValidationError("set system: set " + std::to_string(i) +
                                " has element " + std::to_string(s[j]) +
                                " outside universe of size " +
                                std::to_string(universe_size));
        if (j > 0 && s[j] == s[j - 1])
          throw ValidationError("set system: set " + std::to_string(i) +
                                " has duplicate element " + std::to_string(s[j]));
      }
    }
    SetSystem out;
    out.universe_size = universe_size;
    out.sets = std::move(sets);
    return out;
  }

  int num_sets() const { return static_cast<int>(sets.size()); }
};

// Assignment of one of num_colors colors to every universe element.
struct Coloring {
  int num_colors = 0;
  std::vector<int> assignment;

  static Coloring make(int num_colors, std::vector<int> assignment) {
    if (num_colors < 1) throw ValidationError("coloring: needs at least one color");
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] < 0 || assignment[i] >= num_colors)
        throw ValidationError("coloring: element " + std::to_string(i) +
                              " has color " + std::to_string(assignment[i]) +
                              " outside [0, " + std::to_string(num_colors) + ")");
    Coloring out;
    out.num_colors = num_colors;
    out.assignment = std::move(assignment);
    return out;
  }

  int size() const { return static_cast<int>(assignment.size()); }
};

// Agents with additive nonnegative integer valuations over num_items items,
// partitioned into groups 0..num_groups()-1 (num_groups = max group id + 1;
// a group may be empty). Each group has at most one leader; a leader values
// every item at exactly 1.
struct GroupedInstance {
  int num_items = 0;
  std::vector<int> group_of;                        // per agent
  std::vector<int> leaders;                         // agent ids, ascending
  std::vector<std::vector<long long>> valuations;   // n x num_items

  static GroupedInstance make(int num_items, std::vector<int> group_of,
                              std::vector<int> leaders,
                              std::vector<std::vector<long long>> valuations) {
    if (num_items <= 0)
      throw ValidationError("instance: num_items must be positive");
    const std::size_t n = group_of.size();
    if (n == 0) throw ValidationError("instance: needs at least one agent");
    if (valuations.size() != n)
      throw DimensionError("instance: " + std::to_string(n) + " agents but " +
                           std::to_string(valuations.size()) + " valuation rows");
    for (std::size_t i = 0; i < n; ++i) {
      if (group_of[i] < 0)
        throw ValidationError("instance: agent " + std::to_string(i) +
                              " has negative group");
      if (valuations[i].size() != static_cast<std::size_t>(num_items))
        throw DimensionError("instance: valuation row " + std::to_string(i) +
                             " has " + std::to_string(valuations[i].size()) +
                             " entries, expected " + std::to_string(num_items));
      for (long long v : valuations[i])
        if (v < 0)
          throw ValidationError("instance: agent " + std::to_string(i) +
                                " has a negative value");
    }
    std::sort(leaders.begin(), leaders.end());
    std::vector<char> group_has_leader;
    for (std::size_t j = 0; j < leaders.size(); ++j) {
      const int a = leaders[j];
      if (a < 0 || static_cast<std::size_t>(a) >= n)
        throw ValidationError("instance: leader id " + std::to_string(a) +
                              " out of range");
      if (j > 0 && leaders[j] == leaders[j - 1])
        throw ValidationError("instance: duplicate leader " + std::to_string(a));
      const int g = group_of[a];
      if (static_cast<std::size_t>(g) >= group_has_leader.size())
        group_has_leader.resize(g + 1, 0);
      if (group_has_leader[g])
        throw ValidationError("instance: group " + std::to_string(g) +
                              " has more than one leader");
      group_has_leader[g] = 1;
      for (long long v : valuations[a])
        if (v != 1)
          throw ValidationError("instance: leader " + std::to_string(a) +
                                " must value every item at 1");
    }
    GroupedInstance out;
    out.num_items = num_items;
    out.group_of = std::move(group_of);
    out.leaders = std::move(leaders);
    out.valuations = std::move(valuations);
    return out;
  }

  int num_agents() const { return static_cast<int>(group_of.size()); }
  int num_groups() const {
    int k = 0;
    for (int g : group_of) k = std::max(k, g + 1);
    return k;
  }

  long long value(int agent, const std::vector<int>& bundle) const {
    long long total = 0;
    for (int item : bundle) total += valuations[agent][item];
    return total;
  }
  long long total_value(int agent) const {
    long long total = 0;
    for (long long v : valuations[agent]) total += v;
    return total;
  }
};

// Ordered partition of {0, ..., num_items()-1} into bundles (possibly empty).
struct Allocation {
  std::vector<std::vector<int>> bundles;  // each sorted ascending

  static Allocation make(int num_items, std::vector<std::vector<int>> bundles) {
    if (bundles.empty()) throw ValidationError("allocation: needs at least one bundle");
    std::vector<char> seen(num_items, 0);
    int covered = 0;
    for (std::size_t b = 0; b < bundles.size(); ++b) {
      auto& bundle = bundles[b];
      std::sort(bundle.begin(), bundle.end());
      for (int item : bundle) {
        if (item < 0 || item >= num_items)
          throw ValidationError("allocation: bundle " + std::to_string(b) +
                                " has item " + std::to_string(item) +
                                " outside [0, " + std::to_string(num_items) + ")");
        if (seen[item])
          throw ValidationError("allocation: item " + std::to_string(item) +
                                " appears in more than one bundle");
        seen[item] = 1;
        ++covered;
      }
    }
    if (covered != num_items)
      throw ValidationError("allocation: covers " + std::to_string(covered) +
                            " of " + std::to_string(num_items) + " items");
    Allocation out;
    out.bundles = std::move(bundles);
    return out;
  }

  int num_bundles() const { return static_cast<int>(bundles.size()); }
  int num_items() const {
    int total = 0;
    for (const auto& b : bundles) total += static_cast<int>(b.size());
    return total;
  }
};

// One verified inequality in an analytic chain, normalized so the claim is
// "lhs_log <= rhs_log". For probability steps the two fields hold natural
// logs; for algebraic threshold/exponent steps they hold the raw side
// values, and for steps decided in exact arithmetic they are float
// renderings of the exact sides (holds comes from the exact comparison).
// `preconditions_met` records whether the parameters satisfy the hypotheses
// under which the step is actually proved; steps are still evaluated and
// reported when they are not, so desk-scale runs show exactly which steps
// lean on scale.
struct BoundReport {
  std::string label;
  long double lhs_log = 0;
  long double rhs_log = 0;
  bool holds = false;
  bool preconditions_met = true;
};

}  // namespace fairdisc
