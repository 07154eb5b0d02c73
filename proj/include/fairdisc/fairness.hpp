#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "fairdisc/errors.hpp"
#include "fairdisc/types.hpp"

namespace fairdisc {

enum class FairnessNotion { CD, EF, PROP };

inline const char* notion_name(FairnessNotion n) {
  switch (n) {
    case FairnessNotion::CD: return "cd";
    case FairnessNotion::EF: return "ef";
    default: return "prop";
  }
}

namespace detail {

inline void require_alloc_matches(const GroupedInstance& inst, const Allocation& a) {
  if (a.num_items() != inst.num_items)
    throw DimensionError("fairness: allocation covers " +
                         std::to_string(a.num_items()) + " items, instance has " +
                         std::to_string(inst.num_items));
}

inline void require_groups_in_bundles(const GroupedInstance& inst, int k) {
  if (inst.num_groups() > k)
    throw DimensionError("fairness: agents use " +
                         std::to_string(inst.num_groups()) + " groups but only " +
                         std::to_string(k) + " bundles exist");
}

// Prefix sums of one agent's values over a bundle, largest value first, so
// prefix[r] is the most total value removable with r items. Removal ties are
// broken by ascending item index, which the stable sort below preserves;
// only the sums matter for the minimal count.
inline std::vector<long long> removal_prefix(const GroupedInstance& inst, int agent,
                                             const std::vector<int>& bundle) {
  std::vector<long long> vals;
  vals.reserve(bundle.size());
  for (int item : bundle) vals.push_back(inst.valuations[agent][item]);
  std::stable_sort(vals.begin(), vals.end(), std::greater<long long>());
  std::vector<long long> prefix(vals.size() + 1, 0);
  for (std::size_t r = 0; r < vals.size(); ++r) prefix[r + 1] = prefix[r] + vals[r];
  return prefix;
}

// Smallest r with prefix[r] >= need (need <= prefix.back() must hold).
inline int min_removals(const std::vector<long long>& prefix, long long need) {
  if (need <= 0) return 0;
  const auto it = std::lower_bound(prefix.begin(), prefix.end(), need);
  return static_cast<int>(it - prefix.begin());
}

}  // namespace detail

// Minimal d such that for every agent i and every ordered bundle pair (h, l)
// some B ⊆ A_l with |B| <= d has v_i(A_h) >= v_i(A_l \ B). For additive
// values, removing the largest-valued items first is optimal, so the greedy
// removal count per (i, h, l) is exact.
inline int cd_min_d(const GroupedInstance& inst, const Allocation& alloc) {
  detail::require_alloc_matches(inst, alloc);
  const int k = alloc.num_bundles();
  int worst = 0;
  std::vector<std::vector<long long>> prefix(k);
  for (int i = 0; i < inst.num_agents(); ++i) {
    for (int b = 0; b < k; ++b)
      prefix[b] = detail::removal_prefix(inst, i, alloc.bundles[b]);
    for (int h = 0; h < k; ++h)
      for (int l = 0; l < k; ++l) {
        if (h == l) continue;
        const long long gap = prefix[l].back() - prefix[h].back();
        worst = std::max(worst, detail::min_removals(prefix[l], gap));
      }
  }
  return worst;
}

// Minimal d such that every agent i has
//   v_i(A_{g(i)}) >= v_i(A_h) - (sum of the d largest values of i in A_h)
// for every bundle h.
inline int ef_min_d(const GroupedInstance& inst, const Allocation& alloc) {
  detail::require_alloc_matches(inst, alloc);
  const int k = alloc.num_bundles();
  detail::require_groups_in_bundles(inst, k);
  int worst = 0;
  for (int i = 0; i < inst.num_agents(); ++i) {
    const long long own = inst.value(i, alloc.bundles[inst.group_of[i]]);
    for (int h = 0; h < k; ++h) {
      if (h == inst.group_of[i]) continue;
      const auto prefix = detail::removal_prefix(inst, i, alloc.bundles[h]);
      worst = std::max(worst, detail::min_removals(prefix, prefix.back() - own));
    }
  }
  return worst;
}

// Minimal d such that every agent i has
//   k * v_i(A_{g(i)}) + k * (sum of the d largest values of i outside
//   A_{g(i)}) >= v_i(all items),
// i.e. the proportionality shortfall is covered by d outside items. The
// comparison is done on integers after scaling both sides by k.
inline int prop_min_d(const GroupedInstance& inst, const Allocation& alloc) {
  detail::require_alloc_matches(inst, alloc);
  const int k = alloc.num_bundles();
  detail::require_groups_in_bundles(inst, k);
  int worst = 0;
  for (int i = 0; i < inst.num_agents(); ++i) {
    const int own_bundle = inst.group_of[i];
    const long long own = inst.value(i, alloc.bundles[own_bundle]);
    const long long total = inst.total_value(i);
    std::vector<int> outside;
    for (int b = 0; b < k; ++b) {
      if (b == own_bundle) continue;
      outside.insert(outside.end(), alloc.bundles[b].begin(), alloc.bundles[b].end());
    }
    const auto prefix = detail::removal_prefix(inst, i, outside);
    // smallest r with k*(own + prefix[r]) >= total
    int r = 0;
    while (static_cast<long long>(k) * (own + prefix[r]) < total) {
      if (r == static_cast<int>(prefix.size()) - 1)
        throw Error("prop: internal inconsistency, full outside set insufficient");
      ++r;
    }
    worst = std::max(worst, r);
  }
  return worst;
}

inline int fairness_min_d(const GroupedInstance& inst, const Allocation& alloc,
                          FairnessNotion notion) {
  switch (notion) {
    case FairnessNotion::CD: return cd_min_d(inst, alloc);
    case FairnessNotion::EF: return ef_min_d(inst, alloc);
    default: return prop_min_d(inst, alloc);
  }
}

inline bool is_cd(const GroupedInstance& inst, const Allocation& a, int d) {
  if (d < 0) throw ParameterError("is_cd: d must be >= 0");
  return cd_min_d(inst, a) <= d;
}
inline bool is_ef(const GroupedInstance& inst, const Allocation& a, int d) {
  if (d < 0) throw ParameterError("is_ef: d must be >= 0");
  return ef_min_d(inst, a) <= d;
}
inline bool is_prop(const GroupedInstance& inst, const Allocation& a, int d) {
  if (d < 0) throw ParameterError("is_prop: d must be >= 0");
  return prop_min_d(inst, a) <= d;
}

// One agent per set with the binary valuation v_i(j) = [j in S_i]. Agents
// are left ungrouped (all in group 0): the result is meant for bundle-count
// comparisons (CD) where groups play no role.
inline GroupedInstance set_system_to_instance(const SetSystem& s) {
  const int n = s.num_sets();
  std::vector<std::vector<long long>> vals(n, std::vector<long long>(s.universe_size, 0));
  for (int i = 0; i < n; ++i)
    for (int e : s.sets[i]) vals[i][e] = 1;
  return GroupedInstance::make(s.universe_size, std::vector<int>(n, 0), {}, std::move(vals));
}

struct FairnessSolveResult {
  Allocation allocation;
  int d = 0;
};

namespace detail {

// Number of canonical bundle patterns: sum over j<=k of Stirling numbers of
// the second kind S(m, j), i.e. surjections onto a first-use-ordered palette.
inline mpz_class canonical_partition_count(int m, int k) {
  std::vector<mpz_class> row(k + 1, 0);  // S(0, 0) = 1
  row[0] = 1;
  for (int i = 1; i <= m; ++i) {
    std::vector<mpz_class> next(k + 1, 0);
    for (int j = 1; j <= k; ++j) next[j] = row[j] * j + row[j - 1];
    row = std::move(next);
  }
  mpz_class total = 0;
  for (int j = 1; j <= k; ++j) total += row[j];
  if (m == 0) total = 1;
  return total;
}

inline std::vector<std::vector<int>> bundles_from_assignment(
    const std::vector<int>& assign, int k) {
  std::vector<std::vector<int>> bundles(k);
  for (std::size_t item = 0; item < assign.size(); ++item)
    bundles[assign[item]].push_back(static_cast<int>(item));
  return bundles;
}

}  // namespace detail

// Exhaustive exact minimum of the per-allocation minimal d over every
// ordered allocation of the items into `num_bundles` bundles (0 = use the
// instance's group count). Ties are broken toward the lexicographically
// smallest allocation, bundles compared as sorted lists. For CD the bundle
// labels carry no meaning, so the enumeration walks canonical colorings
// only (first-use order) and the winner is re-normalized by sorting its
// bundles; EF and PROP are group-labeled and enumerate all assignments.
inline FairnessSolveResult exact_min_over_allocations(const GroupedInstance& inst,
                                                      FairnessNotion notion,
                                                      long long state_cap,
                                                      int num_bundles = 0) {
  const int m = inst.num_items;
  const int k = num_bundles > 0 ? num_bundles : std::max(1, inst.num_groups());
  if (notion != FairnessNotion::CD) detail::require_groups_in_bundles(inst, k);

  const bool canonical = notion == FairnessNotion::CD;
  mpz_class required;
  if (canonical) {
    required = detail::canonical_partition_count(m, k);
  } else {
    mpz_ui_pow_ui(required.get_mpz_t(), static_cast<unsigned long>(k),
                  static_cast<unsigned long>(m));
  }
  if (required > static_cast<long>(state_cap))
    throw CapacityError("allocation search requires " + required.get_str() +
                            " states (cap " + std::to_string(state_cap) + ")",
                        required.fits_ulong_p() ? required.get_ui() : ~0ULL);

  std::vector<int> assign(m, 0);
  bool have_best = false;
  int best_d = 0;
  std::vector<std::vector<int>> best_bundles;

  const auto consider = [&](const std::vector<int>& a) {
    auto bundles = detail::bundles_from_assignment(a, k);
    const Allocation alloc = Allocation::make(m, bundles);
    const int d = fairness_min_d(inst, alloc, notion);
    auto normalized = alloc.bundles;
    if (canonical) std::sort(normalized.begin(), normalized.end());
    if (!have_best || d < best_d || (d == best_d && normalized < best_bundles)) {
      have_best = true;
      best_d = d;
      best_bundles = std::move(normalized);
    }
  };

  if (canonical) {
    // Depth-first walk over first-use-canonical assignments.
    std::vector<int> stack_used(m + 1, 0);
    std::vector<int> a(m, 0);
    const auto rec = [&](auto&& self, int item, int used) -> void {
      if (item == m) {
        consider(a);
        return;
      }
      const int limit = std::min(used + 1, k);
      for (int h = 0; h < limit; ++h) {
        a[item] = h;
        self(self, item + 1, std::max(used, h + 1));
      }
    };
    rec(rec, 0, 0);
  } else {
    // Odometer over all k^m assignments.
    for (;;) {
      consider(assign);
      int pos = m - 1;
      while (pos >= 0 && assign[pos] == k - 1) assign[pos--] = 0;
      if (pos < 0) break;
      ++assign[pos];
    }
  }
  return {Allocation::make(m, best_bundles), best_d};
}

}  // namespace fairdisc
