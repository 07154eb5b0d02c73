#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "fairdisc/binomial.hpp"
#include "fairdisc/errors.hpp"
#include "fairdisc/quadratic.hpp"
#include "fairdisc/rational.hpp"
#include "fairdisc/types.hpp"

namespace fairdisc {

// A full audit of one probabilistic argument: every inequality it rests on,
// evaluated at the supplied parameters. `links` are the analytic steps, in
// the order the argument composes them. `tail_links` compare the analytic
// floors against exact binomial tails and are only filled in when the
// parameters are small enough to enumerate (`tails_evaluated`).
struct ChainReport {
  std::string chain;
  std::vector<BoundReport> links;
  std::vector<BoundReport> tail_links;
  bool tails_evaluated = false;

  bool analytic_hold() const {
    for (const auto& l : links)
      if (!l.holds) return false;
    return true;
  }
  bool all_hold() const {
    if (!analytic_hold()) return false;
    for (const auto& l : tail_links)
      if (!l.holds) return false;
    return true;
  }
};

namespace detail {

// Relative slack for comparisons of independently rounded long doubles.
// 64-bit mantissa gives ~5e-20 per operation; a handful of operations per
// side stays well under this.
inline constexpr long double kFloatSlack = 4e-18L;

inline BoundReport make_link(std::string label, long double lhs,
                             long double rhs, bool pre) {
  const long double scale =
      std::max({fabsl(lhs), fabsl(rhs), 1.0L});
  BoundReport r;
  r.label = std::move(label);
  r.lhs_log = lhs;
  r.rhs_log = rhs;
  r.holds = lhs <= rhs + kFloatSlack * scale;
  r.preconditions_met = pre;
  return r;
}

inline BoundReport identity_link(std::string label, long double lhs,
                                 long double rhs, bool pre) {
  const long double scale =
      std::max({fabsl(lhs), fabsl(rhs), 1.0L});
  BoundReport r;
  r.label = std::move(label);
  r.lhs_log = lhs;
  r.rhs_log = rhs;
  r.holds = fabsl(lhs - rhs) <= 1e-12L * scale;
  r.preconditions_met = pre;
  return r;
}

inline BoundReport exact_link(std::string label, const Quadratic& lhs,
                              const Quadratic& rhs, bool pre,
                              bool strict = false) {
  BoundReport r;
  r.label = std::move(label);
  r.lhs_log = lhs.to_longdouble();
  r.rhs_log = rhs.to_longdouble();
  r.holds = strict ? lhs < rhs : lhs <= rhs;
  r.preconditions_met = pre;
  return r;
}

inline BoundReport exact_eq_link(std::string label, const Quadratic& lhs,
                                 const Quadratic& rhs, bool pre) {
  BoundReport r;
  r.label = std::move(label);
  r.lhs_log = lhs.to_longdouble();
  r.rhs_log = rhs.to_longdouble();
  r.holds = lhs == rhs;
  r.preconditions_met = pre;
  return r;
}

inline BoundReport rat_link(std::string label, const Rational& lhs,
                            const Rational& rhs, bool pre,
                            bool strict = false) {
  BoundReport r;
  r.label = std::move(label);
  r.lhs_log = (long double)lhs.to_double();
  r.rhs_log = (long double)rhs.to_double();
  r.holds = strict ? lhs < rhs : lhs <= rhs;
  r.preconditions_met = pre;
  return r;
}

inline long double log_add_exp(long double a, long double b) {
  const long double hi = std::max(a, b), lo = std::min(a, b);
  return hi + log1pl(expl(lo - hi));
}

inline long double log_sum_exp(const std::vector<long double>& xs) {
  long double hi = xs.front();
  for (long double x : xs) hi = std::max(hi, x);
  long double s = 0;
  for (long double x : xs) s += expl(x - hi);
  return hi + logl(s);
}

// log of an exact probability, with a floor sentinel for zero mass so a
// link against it fails rather than exploding.
inline long double prob_log(const Rational& p) {
  return p.sign() > 0 ? p.log() : -1e30L;
}

// Exact tails get slow past ~O(t^2/64) word operations; cap the per-trial
// work at something that finishes in well under a second.
inline constexpr long long kTailLimit = 20000;

inline bool integral(long double x) {
  return x == floorl(x) && fabsl(x) < 9e15L;
}

}  // namespace detail

// Full audit of the small-discrepancy argument for random set systems at
// parameters (n, k, m, d). Parameters are long double because the regime in
// which every step is proved has k and n beyond 64-bit range; the analytic
// links are evaluated in extended precision either way, with
// preconditions_met=false marking the steps that lean on that regime.
//
// Exact tail links are added when (m, k) are integers and m is small enough
// to enumerate, with d recognized as sqrt(m/k) when it matches to 1e-12.
inline ChainReport disc_chain_report(long double n, long double k,
                                     long double m, long double d) {
  if (!(k >= 2)) throw ParameterError("disc chain: k must be at least 2");
  if (!(n >= 2)) throw ParameterError("disc chain: n must be at least 2");
  if (!(m >= 1)) throw ParameterError("disc chain: m must be at least 1");
  if (!(d > 0)) throw ParameterError("disc chain: d must be positive");

  ChainReport rep;
  rep.chain = "disc";

  const long double mk = m / k;
  const long double d2 = d * d;
  const long double z = expl(-48.0L);
  const bool scale_pre =
      k >= 3.0L + 6.0L / z && n >= 1.0L + 147.0L / z * logl(k);

  rep.links.push_back(
      detail::make_link("claim-eps-window", 6.0L * d, mk - d, true));
  // The tail-bound mass hypothesis must cover every class size in the
  // window, so it is checked at the window's top edge m/k + d (the bottom
  // edge would be the weaker, insufficient form).
  rep.links.push_back(detail::make_link("claim-mass-window",
                                        6.0L * (mk + d), 9.0L * d2, true));
  if (mk - d > 0) {
    rep.links.push_back(detail::make_link(
        "tail-exponent-window", 40.5L * d2 / (mk - d),
        (567.0L / 12.0L) * d2 * k / m, d <= m / (7.0L * k)));
  }
  rep.links.push_back(detail::make_link(
      "exponent-constant", (567.0L / 12.0L) * d2 * k / m, 48.0L, scale_pre));
  rep.links.push_back(
      detail::make_link("complement-exp", log1pl(-z), -z, scale_pre));
  const long double half_lo = floorl(k / 2.0L);
  rep.links.push_back(detail::make_link(
      "halves-union",
      detail::log_add_exp(-half_lo * z, -(k - half_lo) * z),
      logl(2.0L) - (k - 1.0L) / 2.0L * z, scale_pre));
  rep.links.push_back(
      detail::make_link("base-two-vs-e", logl(2.0L), 1.0L, scale_pre));
  rep.links.push_back(detail::make_link("scale-margin", 1.0L,
                                        (k - 3.0L) / 6.0L * z, scale_pre));
  rep.links.push_back(detail::make_link(
      "target-exponent", m * logl(k), (n - 1.0L) * (k / 3.0L) * z,
      scale_pre));
  rep.links.push_back(detail::identity_link(
      "power-identity", -m * logl(k), -m * log2l(k) * logl(2.0L), true));

  if (!detail::integral(m) || !detail::integral(k) ||
      m > detail::kTailLimit)
    return rep;

  const long long mi = (long long)m, ki = (long long)k;
  const Rational mean(mi, 2 * ki);
  const bool d_is_root = fabsl(d - sqrtl(mk)) <= 1e-12L * d;
  const Quadratic dq = d_is_root ? Quadratic::root(Rational(mi, ki))
                                 : Quadratic(Rational(mpq_class((double)d)),
                                             Rational(0));
  const Quadratic mean_q(mean, dq.radicand());

  const Quadratic win_lo = mean_q * Rational(2) - dq;
  const Quadratic win_hi = mean_q * Rational(2) + dq;
  long long s_lo = win_lo.ceil().get_si();
  long long s_hi = win_hi.floor().get_si();
  s_lo = std::max(s_lo, 0LL);
  s_hi = std::min(s_hi, mi);
  if (s_lo > s_hi) return rep;

  rep.tails_evaluated = true;
  for (long long s : {s_lo, s_hi}) {
    const Quadratic half(Rational(s, 2), dq.radicand());
    const bool claim_ok =
        dq * Rational(6) <= Quadratic(Rational(s), dq.radicand()) &&
        Quadratic(Rational(2 * s), dq.radicand()) <= dq * dq * Rational(3);
    const std::string at = "@s=" + std::to_string(s);
    for (int side = 0; side < 2; ++side) {
      const bool low = side == 0;
      const std::string tag = (low ? "-low" : "-high") + at;
      const Rational event =
          low ? prob_below(s, mean_q - dq) : prob_above(s, mean_q + dq);
      const Rational window = low
                                  ? prob_at_most(s, half - dq * Rational(3, 2))
                                  : prob_at_least(s, half + dq * Rational(3, 2));
      const long double floor_log = -40.5L * d2 / (long double)s;
      rep.tail_links.push_back(detail::make_link(
          "event-covers-window-tail" + tag, detail::prob_log(window),
          detail::prob_log(event), true));
      rep.tail_links.push_back(detail::make_link(
          "window-tail-floor" + tag, floor_log, detail::prob_log(window),
          claim_ok));
      rep.tail_links.push_back(detail::make_link(
          "event-floor" + tag, floor_log, detail::prob_log(event),
          claim_ok));
    }
    if (s_lo == s_hi) break;
  }
  return rep;
}

// The two hypotheses of the tail-bound claim, checked exactly at the window
// edges of the disc construction (d = sqrt(m/k)). Both hold iff m >= 49k.
inline std::vector<BoundReport> disc_window_claim_links(long long m,
                                                        long long k) {
  if (k < 1) throw ParameterError("disc claim: k must be positive");
  if (m < 1) throw ParameterError("disc claim: m must be positive");
  const Rational mk(m, k);
  const Quadratic d = Quadratic::root(mk);
  const Quadratic mkq(mk, mk);
  std::vector<BoundReport> out;
  out.push_back(
      detail::exact_link("claim-eps-window", d * Rational(6), mkq - d, true));
  out.push_back(detail::exact_link("claim-mass-window",
                                   (mkq + d) * Rational(6),
                                   mkq * Rational(9), true));
  return out;
}

// Audit of the per-follower envy argument at one realized allocation shape.
// bundle_sizes are the k bundle sizes; own_group/rival_group pick the pair
// whose envy event the chain bounds. Every size must land in the window
// [m/k - d, m/k + d] with d = sqrt(m/k); the chain is about that event.
inline ChainReport ef_event_chain_report(
    long long n, long long k, long long m,
    const std::vector<long long>& bundle_sizes, int own_group,
    int rival_group) {
  if (k < 2) throw ParameterError("ef chain: k must be at least 2");
  if (m < 1) throw ParameterError("ef chain: m must be at least 1");
  if (n < k + 1) throw ParameterError("ef chain: n must exceed k");
  if ((long long)bundle_sizes.size() != k)
    throw DimensionError("ef chain: expected " + std::to_string(k) +
                         " bundle sizes, got " +
                         std::to_string(bundle_sizes.size()));
  long long total = 0;
  for (long long s : bundle_sizes) total += s;
  if (total != m)
    throw DimensionError("ef chain: bundle sizes sum to " +
                         std::to_string(total) + ", expected " +
                         std::to_string(m));
  if (own_group < 0 || own_group >= k || rival_group < 0 || rival_group >= k)
    throw ParameterError("ef chain: group index out of range");
  if (own_group == rival_group)
    throw ParameterError("ef chain: own and rival groups must differ");

  const Rational mk(m, k);
  const Quadratic d = Quadratic::root(mk);
  const Rational rad = d.radicand();
  const Quadratic mkq(mk, rad);
  for (long long h = 0; h < k; ++h) {
    const Quadratic s(Rational(bundle_sizes[h]), rad);
    if (s < mkq - d || s > mkq + d)
      throw PreconditionError(
          "ef chain: bundle " + std::to_string(h) + " (size " +
          std::to_string(bundle_sizes[h]) +
          ") is outside the size window [m/k - d, m/k + d]");
  }

  const long long s_own = bundle_sizes[own_group];
  const long long s_riv = bundle_sizes[rival_group];
  const Quadratic own_q(Rational(s_own), rad);
  const Quadratic riv_q(Rational(s_riv), rad);
  const bool scale_ok = m >= 121 * k;
  const long double z = expl(-124.0L);
  const long double kl = (long double)k;
  const bool n_ok =
      (long double)n >= kl + 242.0L / z * kl * logl(kl);

  ChainReport rep;
  rep.chain = "ef";
  rep.links.push_back(detail::exact_link("rival-size-floor",
                                         own_q - d * Rational(2), riv_q,
                                         true));
  rep.links.push_back(detail::exact_link(
      "own-threshold-shift", own_q * Rational(1, 2) - d * Rational(5, 2),
      riv_q * Rational(1, 2) - d * Rational(3, 2), true));
  rep.links.push_back(
      detail::exact_link("claim-eps", d * Rational(10), own_q, scale_ok));
  rep.links.push_back(detail::exact_link(
      "claim-mass", Quadratic(Rational(6 * s_own), rad),
      Quadratic(mk * Rational(25), rad), scale_ok));
  const Quadratic window_floor = mkq - d;
  if (window_floor.sign() > 0) {
    rep.links.push_back(detail::exact_link(
        "tail-exponent-window",
        Quadratic(mk * Rational(225, 2) / Rational(s_own), rad),
        Quadratic(mk * Rational(225, 2), rad) / window_floor, true));
    rep.links.push_back(detail::exact_link(
        "tail-exponent-constant",
        Quadratic(mk * Rational(225, 2), rad) / window_floor,
        Quadratic(Rational(2475, 20), rad), scale_ok));
  }
  rep.links.push_back(detail::rat_link("constant-below-final",
                                       Rational(2475, 20), Rational(124),
                                       true, true));
  rep.links.push_back(detail::make_link("complement-exp",
                                        log1pl(-z / 2.0L), -z / 2.0L, true));
  rep.links.push_back(detail::make_link(
      "target-exponent", (long double)m * logl(kl),
      ((long double)n - kl) / 2.0L * z, n_ok));
  rep.links.push_back(detail::identity_link(
      "power-identity", -(long double)m * logl(kl),
      -(long double)m * log2l(kl) * logl(2.0L), true));

  if (m <= detail::kTailLimit) {
    rep.tails_evaluated = true;
    const Quadratic own_thr = own_q * Rational(1, 2) - d * Rational(5, 2);
    const Quadratic shift_thr = riv_q * Rational(1, 2) - d * Rational(3, 2);
    const Rational p_own = prob_at_most(s_own, own_thr);
    const Rational p_shift = prob_at_most(s_own, shift_thr);
    const Rational p_riv = prob_at_least(s_riv, Quadratic(Rational(s_riv, 2), rad));
    rep.tail_links.push_back(detail::make_link(
        "own-tail-shift", detail::prob_log(p_own), detail::prob_log(p_shift),
        true));
    rep.tail_links.push_back(detail::make_link(
        "own-tail-floor",
        -4.5L * 25.0L * (long double)m / (long double)(k * s_own),
        detail::prob_log(p_own), scale_ok));
    rep.tail_links.push_back(detail::make_link(
        "rival-median", logl(0.5L), detail::prob_log(p_riv), true));
    rep.tail_links.push_back(detail::make_link(
        "pair-product-floor", -124.0L + logl(0.5L),
        detail::prob_log(p_shift) + detail::prob_log(p_riv), scale_ok));
  }
  return rep;
}

// Audit of the per-follower proportionality argument at one realized
// allocation shape, d = sqrt(m/k^3). Only the lower size restriction
// |A_h| >= m/k - d is required of the input.
inline ChainReport prop_event_chain_report(
    long long n, long long k, long long m,
    const std::vector<long long>& bundle_sizes, int own_group) {
  if (k < 2) throw ParameterError("prop chain: k must be at least 2");
  if (k > 100000) throw ParameterError("prop chain: k too large");
  if (m < 1) throw ParameterError("prop chain: m must be at least 1");
  if (n < k + 1) throw ParameterError("prop chain: n must exceed k");
  if ((long long)bundle_sizes.size() != k)
    throw DimensionError("prop chain: expected " + std::to_string(k) +
                         " bundle sizes, got " +
                         std::to_string(bundle_sizes.size()));
  long long total = 0;
  for (long long s : bundle_sizes) total += s;
  if (total != m)
    throw DimensionError("prop chain: bundle sizes sum to " +
                         std::to_string(total) + ", expected " +
                         std::to_string(m));
  if (own_group < 0 || own_group >= k)
    throw ParameterError("prop chain: group index out of range");

  const Rational mk(m, k);
  const Quadratic d = Quadratic::root(Rational(m, k * k * k));
  const Rational rad = d.radicand();
  const Quadratic mkq(mk, rad);
  for (long long h = 0; h < k; ++h) {
    const Quadratic s(Rational(bundle_sizes[h]), rad);
    if (s < mkq - d)
      throw PreconditionError("prop chain: bundle " + std::to_string(h) +
                              " (size " + std::to_string(bundle_sizes[h]) +
                              ") is below the size floor m/k - d");
  }

  const long long s_own = bundle_sizes[own_group];
  const Quadratic own_q(Rational(s_own), rad);
  const bool scale_ok = m >= 81 * k;
  const long double z = expl(-77.0L);
  const long double kl = (long double)k;
  const bool n_ok =
      (long double)n >= kl + 162.0L / z * kl * logl(kl);

  ChainReport rep;
  rep.chain = "prop";
  rep.links.push_back(detail::exact_link(
      "own-size-ceiling", own_q, mkq + d * Rational(k - 1), true));
  rep.links.push_back(
      detail::exact_link("claim-eps", d * Rational(8 * k), own_q, scale_ok));
  rep.links.push_back(detail::rat_link("claim-mass", Rational(6 * s_own),
                                       Rational(16 * m, k), scale_ok));
  rep.links.push_back(detail::rat_link("own-size-main-floor",
                                       Rational(17 * m),
                                       Rational(18 * k * s_own), scale_ok));
  rep.links.push_back(detail::rat_link(
      "tail-exponent-main", Rational(72 * m, k * s_own),
      Rational(1296, 17), scale_ok));
  rep.links.push_back(detail::rat_link("exponent-constant",
                                       Rational(1296, 17), Rational(77),
                                       true, true));
  const Quadratic deficit =
      (Quadratic(Rational(m), rad) - own_q) * Rational(1, 2) -
      (own_q * Rational(1, 2) - d * Rational(2 * k)) * Rational(k - 1);
  rep.links.push_back(detail::exact_link(
      "deficit-floor", d * Rational(3 * k * (k - 1), 2), deficit, true));
  rep.links.push_back(detail::exact_link("deficit-positive", d * Rational(k),
                                         d * Rational(3 * k * (k - 1), 2),
                                         true, true));
  rep.links.push_back(detail::make_link("complement-exp",
                                        log1pl(-z / 2.0L), -z / 2.0L, true));
  rep.links.push_back(detail::make_link(
      "target-exponent", (long double)m * logl(kl),
      ((long double)n - kl) / 2.0L * z, n_ok));
  rep.links.push_back(detail::identity_link(
      "power-identity", -(long double)m * logl(kl),
      -(long double)m * log2l(kl) * logl(2.0L), true));

  if (m <= detail::kTailLimit) {
    rep.tails_evaluated = true;
    const Quadratic own_thr =
        own_q * Rational(1, 2) - d * Rational(2 * k);
    const Rational p_own = prob_at_most(s_own, own_thr);
    const long long s_out = m - s_own;
    const Rational p_out =
        prob_at_least(s_out, Quadratic(Rational(s_out, 2), rad));
    rep.tail_links.push_back(detail::make_link(
        "own-tail-floor",
        -4.5L * 16.0L * (long double)m / (long double)(k * s_own),
        detail::prob_log(p_own), scale_ok));
    rep.tail_links.push_back(detail::make_link(
        "outside-median", logl(0.5L), detail::prob_log(p_out), true));
    rep.tail_links.push_back(detail::make_link(
        "pair-product-floor", -77.0L + logl(0.5L),
        detail::prob_log(p_own) + detail::prob_log(p_out), scale_ok));
  }
  return rep;
}

// Audit of the variable-group-size proportionality argument,
// d = sqrt(m/k). Bundle sizes are reparameterized as
// |A_h| = m/k + (zeta_h - 1) d with zeta_h >= 0 required; the per-follower
// exponent then depends on the follower's own zeta, and the union step uses
// convexity across the zeta vector.
inline ChainReport propnew_event_chain_report(
    long long min_group_size, long long k, long long m,
    const std::vector<long long>& bundle_sizes, int own_group) {
  if (k < 2) throw ParameterError("group-prop chain: k must be at least 2");
  if (k > 100000) throw ParameterError("group-prop chain: k too large");
  if (m < 1) throw ParameterError("group-prop chain: m must be at least 1");
  if (min_group_size < 2)
    throw ParameterError(
        "group-prop chain: groups need at least one follower");
  if ((long long)bundle_sizes.size() != k)
    throw DimensionError("group-prop chain: expected " + std::to_string(k) +
                         " bundle sizes, got " +
                         std::to_string(bundle_sizes.size()));
  long long total = 0;
  for (long long s : bundle_sizes) total += s;
  if (total != m)
    throw DimensionError("group-prop chain: bundle sizes sum to " +
                         std::to_string(total) + ", expected " +
                         std::to_string(m));
  if (own_group < 0 || own_group >= k)
    throw ParameterError("group-prop chain: group index out of range");

  const Rational mk(m, k);
  const Quadratic d = Quadratic::root(mk);
  const Rational rad = d.radicand();
  const Quadratic mkq(mk, rad);
  std::vector<Quadratic> zeta;
  for (long long h = 0; h < k; ++h) {
    const Quadratic s(Rational(bundle_sizes[h]), rad);
    if (s < mkq - d)
      throw PreconditionError("group-prop chain: bundle " +
                              std::to_string(h) + " (size " +
                              std::to_string(bundle_sizes[h]) +
                              ") is below the size floor m/k - d");
    zeta.push_back((s - mkq) / d + Rational(1));
  }

  const long long s_own = bundle_sizes[own_group];
  const Quadratic own_q(Rational(s_own), rad);
  const Quadratic z_own = zeta[own_group];
  const bool k_ok = k >= 4;
  const bool scale_ok = m >= 16 * k * k * k;
  const long double kl = (long double)k;
  const bool ell_ok =
      (long double)min_group_size >=
      1.0L + 32.0L * expl(96.0L) * kl * kl * logl(kl);

  ChainReport rep;
  rep.chain = "group-prop";
  Quadratic zeta_sum(Rational(0), rad);
  for (const auto& zh : zeta) zeta_sum = zeta_sum + zh;
  rep.links.push_back(detail::exact_eq_link(
      "zeta-sum", zeta_sum, Quadratic(Rational(k), rad), true));
  rep.links.push_back(detail::exact_link(
      "zeta-ceiling", z_own, Quadratic(Rational(k), rad), true));
  rep.links.push_back(detail::exact_eq_link(
      "own-threshold-identity",
      own_q * Rational(1, 2) - (z_own + Rational(3)) * d * Rational(1, 2),
      mkq * Rational(1, 2) - d * Rational(2), true));
  rep.links.push_back(detail::exact_link(
      "claim-eps", (z_own + Rational(3)) * d * Rational(2), own_q,
      k_ok && scale_ok));
  const Quadratic shifted = (z_own + Rational(3)) * d;
  rep.links.push_back(detail::exact_link("claim-mass",
                                         Quadratic(Rational(6 * s_own), rad),
                                         shifted * shifted,
                                         k_ok && scale_ok));
  rep.links.push_back(detail::rat_link("tail-exponent-simplify",
                                       Rational(3 * m),
                                       Rational(4 * k * s_own), scale_ok));
  rep.links.push_back(detail::exact_link(
      "outside-threshold-ceiling",
      Quadratic(Rational(m * (k - 1), 2 * k), rad) -
          d * Rational(k - 1, 2),
      Quadratic(Rational(m - s_own, 2), rad), true));

  std::vector<long double> exps;
  for (const auto& zh : zeta) {
    const long double v = zh.to_longdouble() + 3.0L;
    exps.push_back(-6.0L * v * v);
  }
  rep.links.push_back(detail::make_link("jensen-floor",
                                        logl(kl) - 96.0L,
                                        detail::log_sum_exp(exps), true));
  const long double v_own = z_own.to_longdouble() + 3.0L;
  const long double z_exp = expl(-6.0L * v_own * v_own);
  rep.links.push_back(detail::make_link(
      "complement-exp", log1pl(-z_exp / 2.0L), -z_exp / 2.0L, true));
  rep.links.push_back(detail::make_link(
      "target-exponent", (long double)m * logl(kl),
      kl * ((long double)min_group_size - 1.0L) / 2.0L * expl(-96.0L),
      ell_ok && k_ok));
  rep.links.push_back(detail::identity_link(
      "power-identity", -(long double)m * logl(kl),
      -(long double)m * log2l(kl) * logl(2.0L), true));

  if (m <= detail::kTailLimit) {
    rep.tails_evaluated = true;
    const Quadratic own_thr = mkq * Rational(1, 2) - d * Rational(2);
    const Rational p_own = prob_at_most(s_own, own_thr);
    const long long s_out = m - s_own;
    const Quadratic out_thr =
        Quadratic(Rational(m * (k - 1), 2 * k), rad) -
        d * Rational(k - 1, 2);
    const Rational p_out = prob_at_least(s_out, out_thr);
    rep.tail_links.push_back(detail::make_link(
        "own-tail-floor",
        -4.5L * v_own * v_own * (long double)mk.to_double() /
            (long double)s_own,
        detail::prob_log(p_own), k_ok && scale_ok));
    rep.tail_links.push_back(detail::make_link(
        "outside-median-shift", logl(0.5L), detail::prob_log(p_out), true));
    rep.tail_links.push_back(detail::make_link(
        "pair-product-floor", -6.0L * v_own * v_own + logl(0.5L),
        detail::prob_log(p_own) + detail::prob_log(p_out),
        k_ok && scale_ok));
  }
  return rep;
}

// The convexity step of the union bound on its own: for zeta_h >= 0 summing
// to k, sum_h exp(-c (3 + zeta_h)^2) >= k exp(-16 c). Proved for
// c >= 1/18 (where the summand is convex over the whole range).
inline BoundReport jensen_convexity_link(const std::vector<long double>& zetas,
                                         long double c) {
  if (zetas.empty())
    throw ParameterError("jensen: need at least one zeta");
  const long double k = (long double)zetas.size();
  long double sum = 0;
  for (long double z : zetas) {
    if (z < 0) throw ParameterError("jensen: zetas must be nonnegative");
    sum += z;
  }
  if (fabsl(sum - k) > 1e-9L * k)
    throw ParameterError("jensen: zetas must sum to the number of groups");
  std::vector<long double> exps;
  for (long double z : zetas) exps.push_back(-c * (3.0L + z) * (3.0L + z));
  char buf[64];
  snprintf(buf, sizeof buf, "jensen-floor(k=%d, c=%Lg)", (int)zetas.size(),
           c);
  return detail::make_link(buf, logl(k) - 16.0L * c,
                           detail::log_sum_exp(exps), c >= 1.0L / 18.0L);
}

}  // namespace fairdisc
