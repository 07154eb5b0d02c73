#pragma once

#include <gmpxx.h>

#include <string>

#include "fairdisc/errors.hpp"
#include "fairdisc/quadratic.hpp"
#include "fairdisc/rational.hpp"
#include "fairdisc/types.hpp"

namespace fairdisc {

// Exact Pr[X <= j] for X ~ Binomial(t, 1/2): sum_{i<=j} C(t,i) / 2^t.
// Out-of-range j clamps to 0 or 1.
inline Rational binom_tail_le(long long t, long long j) {
  if (t < 0) throw ParameterError("binomial tail: t must be >= 0");
  if (j < 0) return Rational(0);
  if (j >= t) return Rational(1);
  mpz_class sum = 0, c = 1;  // c = C(t, i)
  for (long long i = 0; i <= j; ++i) {
    sum += c;
    c *= static_cast<long>(t - i);
    c /= static_cast<long>(i + 1);
  }
  return Rational(std::move(sum), Rational::pow2(static_cast<unsigned long>(t)).num());
}

// Exact Pr[X >= j]; by the symmetry of Binomial(t, 1/2) this equals
// Pr[X <= t - j].
inline Rational binom_tail_ge(long long t, long long j) {
  if (t < 0) throw ParameterError("binomial tail: t must be >= 0");
  return binom_tail_le(t, t - j);
}

namespace detail {

inline long long clamped_index(const mpz_class& z, long long t) {
  // Collapse anything outside [0, t] so tails clamp without overflow.
  if (z < 0) return -1;
  if (z > static_cast<long>(t)) return t + 1;
  return z.get_si();
}

}  // namespace detail

// Pr[X < threshold] and friends for X ~ Binomial(t, 1/2) at an exact
// threshold from the quadratic extension (rational +- rational * sqrt(D)).
inline Rational prob_below(long long t, const Quadratic& threshold) {
  return binom_tail_le(t, detail::clamped_index(threshold.ceil() - 1, t));
}
inline Rational prob_at_most(long long t, const Quadratic& threshold) {
  return binom_tail_le(t, detail::clamped_index(threshold.floor(), t));
}
inline Rational prob_above(long long t, const Quadratic& threshold) {
  return binom_tail_ge(t, detail::clamped_index(threshold.floor() + 1, t));
}
inline Rational prob_at_least(long long t, const Quadratic& threshold) {
  return binom_tail_ge(t, detail::clamped_index(threshold.ceil(), t));
}

namespace detail {

inline Rational check_chernoff_domain(long long t, const Rational& eps) {
  if (t < 1) throw DomainError("reverse chernoff: t must be >= 1");
  if (eps.sign() <= 0 || eps > Rational(1, 2))
    throw DomainError("reverse chernoff: eps must lie in (0, 1/2], got " + eps.str());
  const Rational mass = eps * eps * Rational(t);
  if (mass < Rational(6))
    throw DomainError("reverse chernoff: eps^2 * t must be >= 6, got " + mass.str());
  return mass;
}

}  // namespace detail

// Anti-concentration floor for the symmetric binomial: for X ~ B(t, 1/2),
// eps in (0, 1/2] and eps^2 t >= 6,
//   Pr[X <= (t/2)(1 - eps)] >= exp(-9 eps^2 t / 2),
// and the same floor bounds the upper tail Pr[X >= (t/2)(1 + eps)].
inline double reverse_chernoff_bound(long long t, const Rational& eps) {
  const Rational mass = detail::check_chernoff_domain(t, eps);
  return std::exp(-4.5 * mass.to_double());
}
inline double reverse_chernoff_bound(long long t, double eps) {
  return reverse_chernoff_bound(t, Rational(mpq_class(eps)));
}

// Checks the floor against exact tails on both sides. The two exact tails
// coincide (the thresholds are mirror images), so one report covers both;
// lhs is the analytic floor, rhs the exact tail, both as natural logs.
inline BoundReport verify_reverse_chernoff(long long t, const Rational& eps) {
  const Rational mass = detail::check_chernoff_domain(t, eps);
  const Rational half_t(t, 2);
  const Rational low_threshold = half_t * (Rational(1) - eps);
  const Rational high_threshold = half_t * (Rational(1) + eps);
  const Rational low = binom_tail_le(t, detail::clamped_index(low_threshold.floor(), t));
  const Rational high =
      binom_tail_ge(t, detail::clamped_index(high_threshold.ceil(), t));
  const Rational exact = low < high ? low : high;

  BoundReport report;
  report.label = "reverse-chernoff(t=" + std::to_string(t) + ", eps=" + eps.str() + ")";
  report.lhs_log = -4.5L * static_cast<long double>(mass.to_double());
  report.rhs_log = exact.sign() > 0 ? exact.log() : -1e30L;
  report.holds = report.lhs_log <= report.rhs_log;
  report.preconditions_met = true;
  return report;
}
inline BoundReport verify_reverse_chernoff(long long t, double eps) {
  return verify_reverse_chernoff(t, Rational(mpq_class(eps)));
}

}  // namespace fairdisc
