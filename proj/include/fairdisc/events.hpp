#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fairdisc/binomial.hpp"
#include "fairdisc/discrepancy.hpp"
#include "fairdisc/errors.hpp"
#include "fairdisc/generators.hpp"
#include "fairdisc/quadratic.hpp"
#include "fairdisc/rational.hpp"
#include "fairdisc/types.hpp"

namespace fairdisc {

enum class TailSide { Low, High };

// Exact probability that a color class of the given size ends up counting
// strictly below m/(2k) - d (Low) or strictly above m/(2k) + d (High)
// inside a fair-coin random set. Strict thresholds map to integer support
// via Pr[X < x] = Pr[X <= ceil(x)-1] and Pr[X > x] = Pr[X >= floor(x)+1].
inline Rational event_prob_disc(long long color_class_size, long long m, long long k,
                                const Rational& d, TailSide side) {
  if (m < 1) throw ParameterError("event prob: m must be >= 1");
  if (k < 1) throw ParameterError("event prob: k must be >= 1");
  if (color_class_size < 0 || color_class_size > m)
    throw ParameterError("event prob: class size " + std::to_string(color_class_size) +
                         " outside [0, " + std::to_string(m) + "]");
  const Rational mean(m, 2 * k);
  if (side == TailSide::Low) {
    const Rational threshold = mean - d;
    return binom_tail_le(color_class_size,
                         detail::clamped_index(threshold.ceil() - 1, color_class_size));
  }
  const Rational threshold = mean + d;
  return binom_tail_ge(color_class_size,
                       detail::clamped_index(threshold.floor() + 1, color_class_size));
}

// Sufficient condition for high discrepancy, testable on concrete data: if
// some low-half color falls strictly below m/(2k) - d within set i while some
// high-half color rises strictly above m/(2k) + d, the two counts are more
// than 2d apart, so one of them deviates from |S_i|/k by more than d.
// Returns discrepancy(chi, s) > d, which therefore must be true whenever the
// preconditions hold; violated preconditions throw instead of guessing.
inline bool deviation_pair_check(const Coloring& chi, const SetSystem& s, int k,
                                 const Rational& d, int set_index, int low_color,
                                 int high_color) {
  detail::require_matching(chi, s);
  if (k != chi.num_colors)
    throw DimensionError("pair check: k=" + std::to_string(k) + " but coloring has " +
                         std::to_string(chi.num_colors) + " colors");
  if (set_index < 0 || set_index >= s.num_sets())
    throw ParameterError("pair check: set index " + std::to_string(set_index) +
                         " out of range");
  const int half = k / 2;
  if (low_color < 0 || low_color >= half)
    throw PreconditionError("pair check: low color " + std::to_string(low_color) +
                            " outside the first half [0, " + std::to_string(half) + ")");
  if (high_color < half || high_color >= k)
    throw PreconditionError("pair check: high color " + std::to_string(high_color) +
                            " outside the second half [" + std::to_string(half) + ", " +
                            std::to_string(k) + ")");
  long long low_count = 0, high_count = 0;
  for (int e : s.sets[set_index]) {
    if (chi.assignment[e] == low_color) ++low_count;
    if (chi.assignment[e] == high_color) ++high_count;
  }
  const Rational mean(s.universe_size, 2LL * k);
  if (!(Rational(low_count) < mean - d))
    throw PreconditionError("pair check: low-side count " + std::to_string(low_count) +
                            " is not strictly below " + (mean - d).str());
  if (!(Rational(high_count) > mean + d))
    throw PreconditionError("pair check: high-side count " + std::to_string(high_count) +
                            " is not strictly above " + (mean + d).str());
  return discrepancy(chi, s).value > d;
}

// Which random construction a Monte Carlo run should resample each trial.
struct GeneratorSpec {
  enum class Family { Disc, Ef, Prop, PropNew };
  Family family = Family::Disc;
  long long n = 0;
  int k = 2;
  double constant_c = 1.0;
  std::vector<long long> group_sizes;  // required for PropNew, optional otherwise
};

// One tail event, evaluated against a fixed coloring (set-system events) or a
// fixed allocation (instance events) while the random side is redrawn.
// Thresholds live in the quadratic extension so the construction's exact
// d = sqrt(m/k) (or sqrt(m/k^3)) can be passed without rounding.
struct EventQuery {
  enum class Kind {
    ClassLow,          // |class ∩ S_set| < m/(2k) - d
    ClassHigh,         // |class ∩ S_set| > m/(2k) + d
    OwnBelowRival,     // v(own bundle) <= |rival|/2 - (3/2)d
    RivalAtLeastHalf,  // v(rival bundle) >= |rival|/2
    OwnBelowShare,     // v(own bundle) <= |own|/2 - 2kd
    OutsideAtLeastHalf,   // v(items outside own bundle) >= (m - |own|)/2
    OwnBelowGroupShare,   // v(own bundle) <= m/(2k) - 2d
    OutsideNearGroupShare  // v(outside) >= m(k-1)/(2k) - (k-1)d/2
  };
  Kind kind = Kind::ClassLow;
  Quadratic d;
  // Set-system events:
  Coloring coloring;
  int set_index = 0;
  int color = 0;
  // Instance events:
  Allocation allocation;
  int agent = 0;
  int rival_bundle = -1;
};

struct EventRate {
  double rate = 0;
  double ci_halfwidth = 0;  // normal-approximation 95% interval
};

namespace detail {

inline bool is_class_kind(EventQuery::Kind kind) {
  return kind == EventQuery::Kind::ClassLow || kind == EventQuery::Kind::ClassHigh;
}

inline Quadratic embed(long long num, long long den, const Quadratic& like) {
  return Quadratic(Rational(num, den), like.radicand());
}

inline bool class_event_holds(const EventQuery& q, const SetSystem& s, long long k) {
  if (q.coloring.size() != s.universe_size)
    throw DimensionError("event rate: coloring covers " + std::to_string(q.coloring.size()) +
                         " elements, universe has " + std::to_string(s.universe_size));
  if (q.set_index < 0 || q.set_index >= s.num_sets())
    throw ParameterError("event rate: set index out of range");
  if (q.color < 0 || q.color >= q.coloring.num_colors)
    throw ParameterError("event rate: color out of range");
  long long count = 0;
  for (int e : s.sets[q.set_index])
    if (q.coloring.assignment[e] == q.color) ++count;
  const Quadratic mean = embed(s.universe_size, 2 * k, q.d);
  if (q.kind == EventQuery::Kind::ClassLow)
    return embed(count, 1, q.d) < mean - q.d;
  return embed(count, 1, q.d) > mean + q.d;
}

inline bool instance_event_holds(const EventQuery& q, const GroupedInstance& inst,
                                 long long m, long long k) {
  if (q.allocation.num_items() != inst.num_items)
    throw DimensionError("event rate: allocation covers " +
                         std::to_string(q.allocation.num_items()) + " items, instance has " +
                         std::to_string(inst.num_items));
  if (q.allocation.num_bundles() != k)
    throw DimensionError("event rate: allocation has " +
                         std::to_string(q.allocation.num_bundles()) + " bundles, expected " +
                         std::to_string(k));
  if (q.agent < 0 || q.agent >= inst.num_agents())
    throw ParameterError("event rate: agent out of range");
  const int own = inst.group_of[q.agent];
  const long long own_size = static_cast<long long>(q.allocation.bundles[own].size());
  const long long v_own = inst.value(q.agent, q.allocation.bundles[own]);
  switch (q.kind) {
    case EventQuery::Kind::OwnBelowRival:
    case EventQuery::Kind::RivalAtLeastHalf: {
      if (q.rival_bundle < 0 || q.rival_bundle >= k || q.rival_bundle == own)
        throw ParameterError("event rate: rival bundle must differ from the agent's own");
      const long long rival_size =
          static_cast<long long>(q.allocation.bundles[q.rival_bundle].size());
      if (q.kind == EventQuery::Kind::RivalAtLeastHalf)
        return 2 * inst.value(q.agent, q.allocation.bundles[q.rival_bundle]) >= rival_size;
      return embed(v_own, 1, q.d) <=
             embed(rival_size, 2, q.d) - q.d * Rational(3, 2);
    }
    case EventQuery::Kind::OwnBelowShare:
      return embed(v_own, 1, q.d) <= embed(own_size, 2, q.d) - q.d * Rational(2 * k);
    case EventQuery::Kind::OutsideAtLeastHalf:
      return 2 * (inst.total_value(q.agent) - v_own) >= m - own_size;
    case EventQuery::Kind::OwnBelowGroupShare:
      return embed(v_own, 1, q.d) <= embed(m, 2 * k, q.d) - q.d * Rational(2);
    case EventQuery::Kind::OutsideNearGroupShare:
      return embed(inst.total_value(q.agent) - v_own, 1, q.d) >=
             embed(m * (k - 1), 2 * k, q.d) - q.d * Rational(k - 1, 2);
    default:
      throw ParameterError("event rate: set-system event given an instance construction");
  }
}

}  // namespace detail

// Empirical frequency of the event over `trials` independent redraws of the
// construction (trial t uses the derived seed at(0, t)), with the fixed
// coloring/allocation from the query held constant throughout.
inline EventRate estimate_event_rate(const GeneratorSpec& gen, const EventQuery& q,
                                     long long trials, std::uint64_t seed) {
  if (trials < 100) throw PreconditionError("event rate: trials must be >= 100");
  const bool class_kind = detail::is_class_kind(q.kind);
  if (class_kind != (gen.family == GeneratorSpec::Family::Disc))
    throw ParameterError(class_kind
                             ? "event rate: set-system event needs the disc construction"
                             : "event rate: instance event given the disc construction");
  const CounterRng seeds(seed);
  long long hits = 0;
  for (long long t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = seeds.at(0, t);
    bool hit = false;
    switch (gen.family) {
      case GeneratorSpec::Family::Disc: {
        const auto c = gen_disc_system(gen.n, gen.k, gen.constant_c, trial_seed);
        hit = detail::class_event_holds(q, c.system, c.k);
        break;
      }
      case GeneratorSpec::Family::Ef: {
        const auto c = gen_ef_instance(gen.n, gen.k, gen.constant_c, trial_seed,
                                       gen.group_sizes);
        hit = detail::instance_event_holds(q, c.instance, c.m, c.k);
        break;
      }
      case GeneratorSpec::Family::Prop: {
        const auto c = gen_prop_instance(gen.n, gen.k, gen.constant_c, trial_seed,
                                         gen.group_sizes);
        hit = detail::instance_event_holds(q, c.instance, c.m, c.k);
        break;
      }
      case GeneratorSpec::Family::PropNew: {
        const auto c = gen_propnew_instance(gen.group_sizes, gen.constant_c, trial_seed);
        hit = detail::instance_event_holds(q, c.instance, c.m, c.k);
        break;
      }
    }
    if (hit) ++hits;
  }
  const double rate = static_cast<double>(hits) / static_cast<double>(trials);
  const double ci = 1.96 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
  return {rate, ci};
}

}  // namespace fairdisc
