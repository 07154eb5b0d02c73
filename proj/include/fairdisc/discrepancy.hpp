#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fairdisc/errors.hpp"
#include "fairdisc/rational.hpp"
#include "fairdisc/rng.hpp"
#include "fairdisc/threshold_sat.hpp"
#include "fairdisc/types.hpp"

namespace fairdisc {

// Imbalance of a k-coloring over a set system: the maximum over sets S and
// colors h of | |class(h) ∩ S| - |S|/k |. Internally everything is scaled
// by k so deviations are integers; the reported value is exact.
struct DiscrepancyResult {
  Rational value;
  int witness_set = 0;    // first (set, color) attaining the maximum,
  int witness_color = 0;  // sets scanned ascending, colors ascending
};

namespace detail {

// Scaled deviation max_h |k*cnt_h - |S||, plus the first witness pair.
struct ScaledEval {
  long long value = 0;
  int witness_set = 0;
  int witness_color = 0;
};

inline ScaledEval scaled_discrepancy(const Coloring& chi, const SetSystem& s) {
  const int k = chi.num_colors;
  ScaledEval best;
  std::vector<long long> cnt(k);
  for (int i = 0; i < s.num_sets(); ++i) {
    std::fill(cnt.begin(), cnt.end(), 0);
    for (int e : s.sets[i]) ++cnt[chi.assignment[e]];
    const long long size = static_cast<long long>(s.sets[i].size());
    for (int h = 0; h < k; ++h) {
      const long long dev = std::llabs(k * cnt[h] - size);
      if (dev > best.value) {
        best.value = dev;
        best.witness_set = i;
        best.witness_color = h;
      }
    }
  }
  return best;
}

inline void require_matching(const Coloring& chi, const SetSystem& s) {
  if (chi.size() != s.universe_size)
    throw DimensionError("discrepancy: coloring over " + std::to_string(chi.size()) +
                         " elements but universe has " +
                         std::to_string(s.universe_size));
}

}  // namespace detail

inline DiscrepancyResult discrepancy(const Coloring& chi, const SetSystem& s) {
  detail::require_matching(chi, s);
  const auto ev = detail::scaled_discrepancy(chi, s);
  return {Rational(ev.value, chi.num_colors), ev.witness_set, ev.witness_color};
}

// Exact comparison against a rational threshold.
inline bool check_discrepancy_at_most(const Coloring& chi, const SetSystem& s,
                                      const Rational& d) {
  return discrepancy(chi, s).value <= d;
}

struct ExactSolveResult {
  Coloring coloring;
  DiscrepancyResult result;
  bool optimal = true;
};

namespace detail {

// Depth-first feasibility search over canonical colorings (colors appear in
// order of first use) at a fixed scaled threshold T. Prunes a prefix as soon
// as some set provably cannot finish with every color count inside
// [ceil((|S|-T)/k), floor((|S|+T)/k)]. Sound pruning only, so the first leaf
// reached in lexicographic mode is the lexicographically smallest canonical
// witness. Every extension attempt counts against the shared state budget.
class ThresholdSearch {
 public:
  ThresholdSearch(const SetSystem& s, int k, long long T,
                  const std::vector<int>& order, long long state_cap,
                  long long& states)
      : sys_(s), k_(k), T_(T), order_(order), cap_(state_cap), states_(states) {
    const int m = s.universe_size;
    member_.resize(m);
    for (int i = 0; i < s.num_sets(); ++i)
      for (int e : s.sets[i]) member_[e].push_back(i);
    const int n = s.num_sets();
    lo_.resize(n);
    hi_.resize(n);
    size_.resize(n);
    rem_.resize(n);
    sum_lo_.resize(n);
    cnt_.assign(static_cast<std::size_t>(n) * k, 0);
    for (int i = 0; i < n; ++i) {
      const long long sz = static_cast<long long>(s.sets[i].size());
      size_[i] = sz;
      rem_[i] = sz;
      long long lo = (sz - T + k - 1) / k;  // ceil, valid for sz-T >= 0
      if (sz - T < 0) lo = 0;               // negative bound clamps to zero
      hi_[i] = (sz + T) / k;
      lo_[i] = std::max(0LL, lo);
      sum_lo_[i] = static_cast<long long>(k) * lo_[i];
      feasible_root_ = feasible_root_ && sum_lo_[i] <= sz &&
                       static_cast<long long>(k) * hi_[i] >= sz;
    }
    assign_.assign(m, -1);
  }

  // Returns true iff some canonical coloring stays within the threshold.
  // When `witness` is non-null the search runs in lexicographic order and
  // stores the first (= lexicographically smallest) witness there.
  bool run(std::vector<int>* witness) {
    if (!feasible_root_) return false;
    lex_ = witness != nullptr;
    found_ = false;
    witness_ = witness;
    dfs(0, 0);
    return found_;
  }

 private:
  bool color_ok(int set, int h, int delta_rem) {
    // After the pending update, can this set still finish inside its window?
    const long long c = cnt_[set * k_ + h];
    if (c > hi_[set]) return false;
    if (sum_lo_[set] > size_[set]) return false;
    long long reach = 0;  // sum over colors of min(hi, cnt + rem)
    const long long rem = rem_[set] + delta_rem;
    for (int g = 0; g < k_; ++g)
      reach += std::min(hi_[set], cnt_[set * k_ + g] + rem);
    return reach >= size_[set];
  }

  bool place(int e, int h) {
    for (int set : member_[e]) {
      auto& c = cnt_[set * k_ + h];
      if (c >= lo_[set]) ++sum_lo_[set];
      ++c;
      --rem_[set];
    }
    for (int set : member_[e])
      if (!color_ok(set, h, 0)) return false;
    return true;
  }

  void unplace(int e, int h) {
    for (int set : member_[e]) {
      auto& c = cnt_[set * k_ + h];
      --c;
      if (c >= lo_[set]) --sum_lo_[set];
      ++rem_[set];
    }
  }

  void dfs(int depth, int used) {
    if (found_) return;
    if (depth == static_cast<int>(order_.size())) {
      found_ = true;
      if (witness_) *witness_ = assign_;
      return;
    }
    const int e = order_[depth];
    const int limit = std::min(used + 1, k_);
    int trial[/*max colors*/ 64];
    int trials = 0;
    for (int h = 0; h < limit; ++h) trial[trials++] = h;
    if (!lex_ && trials > 1) {
      // Balance-first value ordering: prefer colors with the least load
      // across the element's sets. Purely heuristic; correctness follows
      // from exhaustiveness.
      long long score[64];
      for (int t = 0; t < trials; ++t) {
        score[t] = 0;
        for (int set : member_[e]) score[t] += cnt_[set * k_ + trial[t]];
      }
      for (int a = 1; a < trials; ++a)
        for (int b = a; b > 0 && score[b] < score[b - 1]; --b) {
          std::swap(score[b], score[b - 1]);
          std::swap(trial[b], trial[b - 1]);
        }
    }
    for (int t = 0; t < trials && !found_; ++t) {
      const int h = trial[t];
      if (++states_ > cap_)
        throw CapacityError("state cap exceeded after visiting " +
                                std::to_string(states_ - 1) +
                                " canonical states (cap " + std::to_string(cap_) + ")",
                            static_cast<unsigned long long>(states_ - 1));
      assign_[e] = h;
      if (place(e, h)) dfs(depth + 1, std::max(used, h + 1));
      unplace(e, h);
      assign_[e] = -1;
    }
  }

  const SetSystem& sys_;
  int k_;
  long long T_;
  const std::vector<int>& order_;
  long long cap_;
  long long& states_;
  std::vector<std::vector<int>> member_;
  std::vector<long long> lo_, hi_, size_, rem_, sum_lo_, cnt_;
  std::vector<int> assign_;
  std::vector<int>* witness_ = nullptr;
  bool lex_ = false;
  bool found_ = false;
  bool feasible_root_ = true;
};

// Cheapest valid lower bound: within a single set of size s, some color ends
// at or below floor(s/k) and some at or above ceil(s/k).
inline long long scaled_lower_bound(const SetSystem& s, int k) {
  long long lb = 0;
  for (const auto& set : s.sets) {
    const long long r = static_cast<long long>(set.size()) % k;
    if (r != 0) lb = std::max(lb, std::max(r, k - r));
  }
  return lb;
}

// Violated-set flip walk for two colors, used to tighten the incumbent
// before the binary search (a sharper upper bound skips whole feasibility
// probes, and the satisfiable probes it replaces are the cheap ones anyway).
// Signed sums (+1 for color 0) update incrementally; each step picks a
// pseudo-random set whose |sum| exceeds `target` and flips the member that
// most reduces the total excess, or a pseudo-random member one step in five
// to get off plateaus. Counter-mode randomness with a fixed seed keeps the
// walk deterministic. Returns the best max |sum| reached; `cur` is left at
// a coloring attaining it. Stops early once `target` itself is reached.
inline long long flip_walk_two_colors(const SetSystem& s, long long target,
                                      std::vector<int>& cur,
                                      long long flip_budget) {
  const int m = s.universe_size;
  const int nsets = static_cast<int>(s.sets.size());
  std::vector<std::vector<int>> elem_sets(m);
  for (int j = 0; j < nsets; ++j)
    for (int e : s.sets[j]) elem_sets[e].push_back(j);

  std::vector<long long> sum(nsets, 0);
  for (int j = 0; j < nsets; ++j)
    for (int e : s.sets[j]) sum[j] += cur[e] == 0 ? 1 : -1;

  const auto excess = [&](long long v) {
    const long long a = v < 0 ? -v : v;
    return a > target ? a - target : 0;
  };
  const auto absll = [](long long v) { return v < 0 ? -v : v; };
  long long total_excess = 0, maxabs = 0;
  for (int j = 0; j < nsets; ++j) {
    total_excess += excess(sum[j]);
    maxabs = std::max(maxabs, absll(sum[j]));
  }

  std::vector<int> best = cur;
  long long best_maxabs = maxabs;
  const CounterRng rng(0x1f2e3d4c5b6a79ULL);

  for (long long step = 0; step < flip_budget && total_excess > 0; ++step) {
    int victim = -1;
    const int start = static_cast<int>(rng.below(0, step, nsets));
    for (int off = 0; off < nsets; ++off) {
      const int j = start + off < nsets ? start + off : start + off - nsets;
      if (excess(sum[j]) > 0) {
        victim = j;
        break;
      }
    }
    const auto& members = s.sets[victim];

    int pick = -1;
    if (rng.below(1, step, 5) == 0) {
      pick = members[rng.below(2, step, members.size())];
    } else {
      long long best_delta = 0;
      bool have = false;
      for (int e : members) {
        const long long move = cur[e] == 0 ? -2 : 2;
        long long delta = 0;
        for (int j : elem_sets[e]) delta += excess(sum[j] + move) - excess(sum[j]);
        if (!have || delta < best_delta) {
          have = true;
          best_delta = delta;
          pick = e;
        }
      }
    }

    const long long move = cur[pick] == 0 ? -2 : 2;
    cur[pick] = 1 - cur[pick];
    long long new_maxabs = 0;
    for (int j : elem_sets[pick]) {
      total_excess += excess(sum[j] + move) - excess(sum[j]);
      sum[j] += move;
    }
    for (int j = 0; j < nsets; ++j)
      new_maxabs = std::max(new_maxabs, absll(sum[j]));
    if (new_maxabs < best_maxabs) {
      best_maxabs = new_maxabs;
      best = cur;
    }
  }
  cur = best;
  return best_maxabs;
}

}  // namespace detail

// Local search: multi-restart single-element recoloring, first improvement,
// elements scanned in index order and colors in ascending order; a move is
// taken only if it strictly decreases the value. Each restart draws a fresh
// uniform coloring from substream r (r = restart index) of the seed, one
// counter per element. budget = number of restarts, so results are
// deterministic given (seed, budget).
inline ExactSolveResult min_discrepancy_search(const SetSystem& s, int k,
                                               std::uint64_t seed,
                                               long long budget) {
  if (k < 2) throw ParameterError("search: k must be >= 2");
  if (budget < 1) throw ParameterError("search: budget must be >= 1");
  const int m = s.universe_size;
  const CounterRng rng(seed);

  std::vector<int> best, cur(m);
  long long best_val = -1;
  for (long long restart = 0; restart < budget; ++restart) {
    for (int e = 0; e < m; ++e)
      cur[e] = static_cast<int>(rng.below(static_cast<std::uint64_t>(restart), e, k));
    Coloring chi = Coloring::make(k, cur);
    long long val = detail::scaled_discrepancy(chi, s).value;
    bool improved = true;
    while (improved) {
      improved = false;
      for (int e = 0; e < m && !improved; ++e) {
        const int old = chi.assignment[e];
        for (int h = 0; h < k && !improved; ++h) {
          if (h == old) continue;
          chi.assignment[e] = h;
          const long long cand = detail::scaled_discrepancy(chi, s).value;
          if (cand < val) {
            val = cand;
            improved = true;
          } else {
            chi.assignment[e] = old;
          }
        }
      }
    }
    if (best_val < 0 || val < best_val) {
      best_val = val;
      best = chi.assignment;
    }
  }
  Coloring chi = Coloring::make(k, best);
  return {chi, discrepancy(chi, s), false};
}

struct ExactOptions {
  long long state_cap = 100'000'000;  // bounds total extension attempts
};

// Exact minimum discrepancy over all k-colorings. The search space is
// reduced by color-symmetry canonicalization (colors indexed in order of
// first use) and explored branch-and-bound style: a local-search incumbent
// brackets the answer, a binary search over integer scaled thresholds pins
// the optimum, and a final lexicographic pass returns the smallest canonical
// optimal coloring. state_cap limits the total number of search states
// visited across all phases; exceeding it raises CapacityError.
inline ExactSolveResult min_discrepancy_exact(const SetSystem& s, int k,
                                              const ExactOptions& opt = {}) {
  if (k < 2) throw ParameterError("exact: k must be >= 2");
  if (k > 64) throw ParameterError("exact: k must be <= 64");
  const int m = s.universe_size;

  // Incumbent. Fixed internal seed: the final answer does not depend on it.
  const auto warm = min_discrepancy_search(s, k, 0x5eedf00d, std::min(24, 4 + m / 4));
  long long hi = warm.result.value.num().get_si() *
                 (k / warm.result.value.den().get_si());
  long long lo = detail::scaled_lower_bound(s, k);
  long long states = 0;

  if (k == 2) {
    // Two colors: conflict-driven engine. Refuting infeasible thresholds is
    // the expensive half of the binary search and clause learning is what
    // keeps those refutations affordable at sizes plain backtracking cannot
    // touch. Pinning element 0 to color 0 is lossless under color swap and
    // doubles as canonicalization.
    std::vector<int> tightened = warm.coloring.assignment;
    const long long walked =
        detail::flip_walk_two_colors(s, lo, tightened, 50'000);
    std::vector<bool> warm_phase(m);
    if (walked < hi) {
      hi = walked;
      for (int e = 0; e < m; ++e) warm_phase[e] = tightened[e] == 0;
    } else {
      for (int e = 0; e < m; ++e)
        warm_phase[e] = warm.coloring.assignment[e] == 0;
    }
    const std::vector<int> pin{detail::ThresholdSat::mk(0, true)};
    while (lo < hi) {
      const long long mid = lo + (hi - lo) / 2;
      detail::ThresholdSat probe(s, mid, opt.state_cap, states);
      probe.hint_phases(warm_phase);
      if (probe.solve(pin))
        hi = mid;
      else
        lo = mid + 1;
    }
    // Lexicographic pass at the optimum: walk the elements in order, keeping
    // each on color 0 whenever the remaining constraints allow it. Queries
    // share one solver, so every refutation learned along the way carries
    // over to the next query.
    detail::ThresholdSat lex(s, lo, opt.state_cap, states);
    lex.hint_phases(warm_phase);
    std::vector<int> fixed{detail::ThresholdSat::mk(0, true)};
    fixed.reserve(m);
    if (!lex.solve(fixed))
      throw Error("exact: internal inconsistency, optimum threshold infeasible");
    std::vector<bool> model = lex.model();
    for (int e = 1; e < m; ++e) {
      fixed.push_back(detail::ThresholdSat::mk(e, true));
      if (model[e]) continue;  // the model itself certifies this prefix
      if (lex.solve(fixed))
        model = lex.model();
      else
        fixed.back() = detail::ThresholdSat::mk(e, false);
    }
    std::vector<int> witness(m);
    for (int e = 0; e < m; ++e) witness[e] = model[e] ? 0 : 1;
    Coloring chi = Coloring::make(2, witness);
    return {chi, discrepancy(chi, s), true};
  }

  // Three or more colors: canonical branch-and-bound. Heuristic element
  // order for the feasibility probes: most-constrained (highest set
  // membership) first.
  std::vector<int> degree(m, 0);
  for (const auto& set : s.sets)
    for (int e : set) ++degree[e];
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return degree[a] > degree[b]; });

  while (lo < hi) {
    const long long mid = lo + (hi - lo) / 2;
    detail::ThresholdSearch search(s, k, mid, order, opt.state_cap, states);
    if (search.run(nullptr))
      hi = mid;
    else
      lo = mid + 1;
  }

  std::vector<int> lex_order(m);
  std::iota(lex_order.begin(), lex_order.end(), 0);
  std::vector<int> witness;
  detail::ThresholdSearch final_pass(s, k, lo, lex_order, opt.state_cap, states);
  if (!final_pass.run(&witness))
    throw Error("exact: internal inconsistency, optimum threshold infeasible");
  Coloring chi = Coloring::make(k, witness);
  return {chi, discrepancy(chi, s), true};
}

}  // namespace fairdisc
