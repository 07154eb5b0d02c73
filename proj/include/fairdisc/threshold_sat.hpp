#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fairdisc/errors.hpp"
#include "fairdisc/types.hpp"

namespace fairdisc {
namespace detail {

// Conflict-driven feasibility engine for two-coloring thresholds.
//
// Variable e is true when element e takes color 0. A scaled threshold T
// turns every set S into a counting window: the number of true members must
// lie in [ceil((|S|-T)/2), floor((|S|+T)/2)]. Each window is compiled into
// clauses through a totalizer, a balanced tree of unary counters whose
// auxiliary variables mean "at least j members of this subtree are true".
// Those auxiliaries matter: clause learning over them can reproduce the
// counting arguments that refute an infeasible threshold, which stays far
// out of reach when learning only sees the element variables.
//
// The solver itself is a small CDCL loop: two watched literals, first-UIP
// conflict analysis with local clause minimization, activity-driven
// branching with phase saving, Luby restarts, and a learnt-clause database
// with periodic reduction. Solving under assumptions reuses everything
// learned so far, which the lexicographic walk in the exact solver leans on.
//
// Element assignments and decisions draw one unit each from the shared
// state budget; exhausting the budget raises CapacityError.
class ThresholdSat {
 public:
  using Lit = int;  // 2v = variable v true, 2v+1 = variable v false
  static int lvar(Lit p) { return p >> 1; }
  static Lit mk(int v, bool positive) { return 2 * v + (positive ? 0 : 1); }
  static Lit lnot(Lit p) { return p ^ 1; }

  ThresholdSat(const SetSystem& s, long long T, long long state_cap,
               long long& states)
      : nelems_(s.universe_size),
        nvars_(s.universe_size),
        cap_(state_cap),
        states_(states) {
    struct Pending {
      std::vector<int> outs;
      long long lo, hi;
    };
    std::vector<Pending> roots;
    for (const auto& set : s.sets) {
      const long long sz = static_cast<long long>(set.size());
      const long long lo = sz <= T ? 0 : (sz - T + 1) / 2;
      const long long hi = std::min(sz, (sz + T) / 2);
      if (lo > hi) {
        ok_ = false;
        return;
      }
      if (lo <= 0 && hi >= sz) continue;  // window never binds
      roots.push_back({build_counter(set, 0, set.size()), lo, hi});
    }
    init_state();
    for (const auto& r : roots) {
      if (r.lo >= 1) add_unit(mk(r.outs[r.lo - 1], true));
      if (r.hi + 1 <= static_cast<long long>(r.outs.size()))
        add_unit(mk(r.outs[r.hi], false));
    }
  }

  // Decides satisfiability under the given assumption literals. A true
  // result leaves the model in model(); false distinguishes nothing about
  // whether the assumptions or the instance itself are to blame.
  bool solve(const std::vector<Lit>& assumps) {
    if (!ok_) return false;
    backtrack(0);
    int restarts = 0;
    long long since_restart = 0;
    long long restart_limit = kLubyUnit * luby(restarts);
    for (;;) {
      bool good = propagate();
      while (!good) {
        if (decision_level() == 0) {
          ok_ = false;
          return false;
        }
        ++since_restart;
        ++stats_.conflicts;
        int bj = 0;
        analyze(bj);
        backtrack(bj);
        good = attach_learnt();
        var_inc_ *= kActivityGrowth;
        if (var_inc_ > 1e100) rescale_activity();
        if (live_learnts_ > max_learnts_) reduce_db();
        if (good) good = propagate();
      }
      if (since_restart >= restart_limit) {
        since_restart = 0;
        restart_limit = kLubyUnit * luby(++restarts);
        ++stats_.restarts;
        backtrack(0);
        continue;
      }
      if (decision_level() < static_cast<int>(assumps.size())) {
        const Lit p = assumps[decision_level()];
        const int8_t v = lit_value(p);
        if (v > 0) {
          push_level();  // already holds, keep level indexing aligned
        } else if (v < 0) {
          return false;
        } else {
          push_level();
          enqueue(p, -1);
        }
        continue;
      }
      if (static_cast<int>(trail_.size()) == nvars_) {
        model_.assign(nelems_, false);
        for (int v = 0; v < nelems_; ++v) model_[v] = val_[v] > 0;
        return true;
      }
      push_level();
      ++stats_.decisions;
      enqueue(pick_branch(), -1);
    }
  }

  const std::vector<bool>& model() const { return model_; }

  // Initial branching polarity for the element variables, e.g. a nearby
  // coloring from local search. Phase saving takes over once learning runs.
  void hint_phases(const std::vector<bool>& prefer_true) {
    if (!ok_) return;
    for (int v = 0; v < nelems_ && v < static_cast<int>(prefer_true.size());
         ++v)
      phase_[v] = prefer_true[v] ? 1 : -1;
  }

  struct Stats {
    long long conflicts = 0;
    long long decisions = 0;
    long long restarts = 0;
  };
  const Stats& stats() const { return stats_; }

 private:
  static constexpr long long kLubyUnit = 64;
  static constexpr double kActivityGrowth = 1.0 / 0.95;

  struct Clause {
    std::vector<Lit> lits;
    double act = 0.0;
    bool del = false;
  };

  // Unary counter over members[from, to): returns one variable per possible
  // count j = 1..width, true when at least j members are true. Leaves are
  // the element variables themselves. Counter variables get a balanced
  // phase prior: counts up to half the subtree are presumed reached.
  std::vector<int> build_counter(const std::vector<int>& members, int from,
                                 int to) {
    if (to - from == 1) return {members[from]};
    const int mid = from + (to - from) / 2;
    const std::vector<int> a = build_counter(members, from, mid);
    const std::vector<int> b = build_counter(members, mid, to);
    const int p = static_cast<int>(a.size());
    const int q = static_cast<int>(b.size());
    std::vector<int> out(p + q);
    for (int j = 0; j < p + q; ++j) {
      out[j] = nvars_++;
      aux_prior_.push_back(2 * (j + 1) <= p + q ? 1 : -1);
    }
    std::vector<Lit> cl;
    for (int i = 0; i <= p; ++i) {
      for (int j = 0; j <= q; ++j) {
        if (i + j >= 1) {  // i trues in a and j trues in b push the sum up
          cl.clear();
          if (i > 0) cl.push_back(mk(a[i - 1], false));
          if (j > 0) cl.push_back(mk(b[j - 1], false));
          cl.push_back(mk(out[i + j - 1], true));
          problem_.push_back(cl);
        }
        if (i + j < p + q) {  // a high sum needs support from a child
          cl.clear();
          cl.push_back(mk(out[i + j], false));
          if (i < p) cl.push_back(mk(a[i], true));
          if (j < q) cl.push_back(mk(b[j], true));
          problem_.push_back(cl);
        }
      }
    }
    return out;
  }

  void init_state() {
    val_.assign(nvars_, 0);
    level_.assign(nvars_, 0);
    reason_.assign(nvars_, -1);
    phase_.assign(nvars_, 1);
    std::copy(aux_prior_.begin(), aux_prior_.end(), phase_.begin() + nelems_);
    aux_prior_.clear();
    aux_prior_.shrink_to_fit();
    act_.assign(nvars_, 0.0);
    seen_.assign(nvars_, 0);
    watches_.resize(2 * static_cast<std::size_t>(nvars_));
    clauses_.reserve(problem_.size());
    for (auto& lits : problem_) {
      if (lits.size() == 1) {
        add_unit(lits[0]);
        continue;
      }
      const int cid = static_cast<int>(clauses_.size());
      watches_[lits[0]].push_back(cid);
      watches_[lits[1]].push_back(cid);
      clauses_.push_back({std::move(lits), 0.0, false});
    }
    problem_.clear();
    problem_.shrink_to_fit();
    n_problem_ = static_cast<int>(clauses_.size());
  }

  void add_unit(Lit p) {
    const int8_t v = lit_value(p);
    if (v > 0) return;
    if (v < 0) {
      ok_ = false;
      return;
    }
    enqueue(p, -1);
  }

  int decision_level() const { return static_cast<int>(lim_.size()); }
  void push_level() { lim_.push_back(static_cast<int>(trail_.size())); }

  int8_t lit_value(Lit p) const {
    const int8_t v = val_[lvar(p)];
    return (p & 1) ? static_cast<int8_t>(-v) : v;
  }

  static long long luby(int i) {
    // Luby restart sequence 1,1,2,1,1,2,4,...
    int k = 1;
    while ((1LL << k) - 1 < i + 1) ++k;
    while ((1LL << k) - 1 != i + 1) {
      i -= static_cast<int>((1LL << (k - 1))) - 1;
      k = 1;
      while ((1LL << k) - 1 < i + 1) ++k;
    }
    return 1LL << (k - 1);
  }

  // Element assignments and decisions are charged; propagation through the
  // auxiliary counter variables is bookkeeping, not search space.
  void charge_state() {
    if (++states_ > cap_)
      throw CapacityError(
          "state cap exceeded after visiting " + std::to_string(states_ - 1) +
              " canonical states (cap " + std::to_string(cap_) + ")",
          static_cast<unsigned long long>(states_ - 1));
  }

  void enqueue(Lit p, int reason_clause) {
    const int v = lvar(p);
    if (v < nelems_ || (reason_clause < 0 && decision_level() > 0))
      charge_state();
    val_[v] = (p & 1) ? -1 : 1;
    level_[v] = decision_level();
    reason_[v] = reason_clause;
    trail_.push_back(p);
  }

  void backtrack(int target) {
    if (decision_level() <= target) return;
    const int keep = lim_[target];
    for (int i = static_cast<int>(trail_.size()) - 1; i >= keep; --i) {
      const int v = lvar(trail_[i]);
      phase_[v] = val_[v];
      val_[v] = 0;
      reason_[v] = -1;
    }
    trail_.resize(keep);
    lim_.resize(target);
    qhead_ = std::min(qhead_, static_cast<std::size_t>(keep));
  }

  // Watched-literal unit propagation. False means conflict, with the
  // falsified clause's literals left in confl_.
  bool propagate() {
    while (qhead_ < trail_.size()) {
      const Lit falsified = lnot(trail_[qhead_++]);
      auto& watch = watches_[falsified];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < watch.size(); ++i) {
        const int cid = watch[i];
        Clause& c = clauses_[cid];
        if (c.del) continue;  // lazily dropped from the list
        auto& lits = c.lits;
        if (lits[0] == falsified) std::swap(lits[0], lits[1]);
        if (lit_value(lits[0]) > 0) {
          watch[keep++] = cid;
          continue;
        }
        bool moved = false;
        for (std::size_t j = 2; j < lits.size(); ++j) {
          if (lit_value(lits[j]) >= 0) {
            std::swap(lits[1], lits[j]);
            watches_[lits[1]].push_back(cid);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        watch[keep++] = cid;
        if (lit_value(lits[0]) < 0) {
          for (std::size_t j = i + 1; j < watch.size(); ++j)
            watch[keep++] = watch[j];
          watch.resize(keep);
          confl_.assign(lits.begin(), lits.end());
          return false;
        }
        enqueue(lits[0], cid);
      }
      watch.resize(keep);
    }
    return true;
  }

  void bump(int v) { act_[v] += var_inc_; }

  void rescale_activity() {
    for (auto& a : act_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }

  // First-UIP conflict analysis over confl_; leaves the learnt clause in
  // learnt_ (asserting literal first) and the backjump level in out_level.
  void analyze(int& out_level) {
    learnt_.clear();
    learnt_.push_back(-1);  // placeholder for the asserting literal
    int path = 0;
    Lit p = -1;
    int index = static_cast<int>(trail_.size());
    std::vector<Lit>* expand = &confl_;
    to_clear_.clear();
    for (;;) {
      for (const Lit q : *expand) {
        if (q == p) continue;
        const int v = lvar(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        to_clear_.push_back(v);
        bump(v);
        if (level_[v] == decision_level())
          ++path;
        else
          learnt_.push_back(q);
      }
      while (!seen_[lvar(trail_[--index])]) {
      }
      p = trail_[index];
      seen_[lvar(p)] = 0;
      if (--path == 0) break;
      Clause& rc = clauses_[reason_[lvar(p)]];
      rc.act = cla_inc_;
      scratch_.assign(rc.lits.begin(), rc.lits.end());
      expand = &scratch_;
    }
    learnt_[0] = lnot(p);
    seen_[lvar(p)] = 1;  // keep marked so minimization can test against it
    to_clear_.push_back(lvar(p));
    minimize_learnt();
    out_level = 0;
    for (std::size_t i = 1; i < learnt_.size(); ++i)
      out_level = std::max(out_level, level_[lvar(learnt_[i])]);
    for (std::size_t i = 1; i < learnt_.size(); ++i)
      if (level_[lvar(learnt_[i])] == out_level) {
        std::swap(learnt_[1], learnt_[i]);
        break;
      }
    for (const int v : to_clear_) seen_[v] = 0;
  }

  // Local minimization: a literal implied by other marked literals through
  // its reason clause is redundant.
  void minimize_learnt() {
    std::size_t keep = 1;
    for (std::size_t i = 1; i < learnt_.size(); ++i) {
      const int v = lvar(learnt_[i]);
      const int rc = reason_[v];
      bool redundant = rc >= 0;
      if (redundant)
        for (const Lit q : clauses_[rc].lits) {
          const int u = lvar(q);
          if (u == v) continue;
          if (!seen_[u] && level_[u] != 0) {
            redundant = false;
            break;
          }
        }
      if (!redundant) learnt_[keep++] = learnt_[i];
    }
    learnt_.resize(keep);
  }

  // Records the learnt clause and asserts its first literal.
  bool attach_learnt() {
    if (learnt_.size() == 1) {
      enqueue(learnt_[0], -1);
      return true;
    }
    const int cid = static_cast<int>(clauses_.size());
    clauses_.push_back({learnt_, cla_inc_, false});
    ++live_learnts_;
    cla_inc_ *= 1.001;
    if (cla_inc_ > 1e100) {
      for (auto& c : clauses_)
        if (!c.del) c.act *= 1e-100;
      cla_inc_ *= 1e-100;
    }
    watches_[learnt_[0]].push_back(cid);
    watches_[learnt_[1]].push_back(cid);
    enqueue(learnt_[0], cid);
    return true;
  }

  bool locked(int cid) const {
    const int v = lvar(clauses_[cid].lits[0]);
    return val_[v] != 0 && reason_[v] == cid;
  }

  void reduce_db() {
    std::vector<int> idx;
    idx.reserve(clauses_.size() - n_problem_);
    for (int i = n_problem_; i < static_cast<int>(clauses_.size()); ++i)
      if (!clauses_[i].del && clauses_[i].lits.size() > 2 && !locked(i))
        idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return clauses_[a].act < clauses_[b].act;
    });
    const std::size_t drop = idx.size() / 2;
    for (std::size_t i = 0; i < drop; ++i) {
      clauses_[idx[i]].del = true;
      clauses_[idx[i]].lits.clear();
      clauses_[idx[i]].lits.shrink_to_fit();
      --live_learnts_;
    }
    max_learnts_ = max_learnts_ + max_learnts_ / 3;
  }

  Lit pick_branch() {
    int best = -1;
    double best_act = -1.0;
    for (int v = 0; v < nvars_; ++v)
      if (val_[v] == 0 && act_[v] > best_act) {
        best_act = act_[v];
        best = v;
      }
    return mk(best, phase_[best] >= 0);
  }

  int nelems_;
  int nvars_;
  long long cap_;
  long long& states_;
  bool ok_ = true;

  std::vector<std::vector<Lit>> problem_;  // staging until init_state
  std::vector<int8_t> aux_prior_;          // staging until init_state
  std::vector<Clause> clauses_;
  int n_problem_ = 0;
  std::vector<std::vector<int>> watches_;

  std::vector<int8_t> val_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<int8_t> phase_;
  std::vector<double> act_;
  std::vector<int8_t> seen_;

  std::vector<Lit> trail_;
  std::vector<int> lim_;
  std::size_t qhead_ = 0;

  std::vector<Lit> confl_, learnt_, scratch_;
  std::vector<int> to_clear_;
  std::vector<bool> model_;

  Stats stats_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  long long live_learnts_ = 0;
  long long max_learnts_ = 4000;
};

}  // namespace detail
}  // namespace fairdisc
