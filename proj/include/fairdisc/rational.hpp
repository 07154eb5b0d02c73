#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "fairdisc/errors.hpp"

namespace fairdisc {

// Exact rational number. Always kept in lowest terms with a positive
// denominator; all arithmetic and comparisons are exact. Backed by GMP.
//
// Values are immutable in spirit: every operation returns a new Rational.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(static_cast<long>(n)) {}  // NOLINT: implicit by design
  Rational(long long num, long long den) {
    if (den == 0) throw ParameterError("rational: zero denominator");
    v_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
    v_.canonicalize();
  }
  explicit Rational(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }
  Rational(mpz_class num, mpz_class den) {
    if (den == 0) throw ParameterError("rational: zero denominator");
    v_ = mpq_class(std::move(num), std::move(den));
    v_.canonicalize();
  }

  // Accepts "p", "-p", or "p/q" (q > 0 after canonicalization).
  static Rational from_string(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0)
      throw ParseError("rational: cannot parse '" + text + "'", 0);
    if (q.get_den() == 0) throw ParameterError("rational: zero denominator");
    q.canonicalize();
    return Rational(std::move(q));
  }

  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }

  // Largest integer <= value / smallest integer >= value.
  mpz_class floor() const {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return r;
  }
  mpz_class ceil() const {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return r;
  }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
  Rational operator/(const Rational& o) const {
    if (o.sign() == 0) throw ParameterError("rational: division by zero");
    return Rational(mpq_class(v_ / o.v_));
  }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }
  bool operator<=(const Rational& o) const { return v_ <= o.v_; }
  bool operator>(const Rational& o) const { return v_ > o.v_; }
  bool operator>=(const Rational& o) const { return v_ >= o.v_; }

  // Canonical text form: "p" when the denominator is 1, else "p/q".
  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  double to_double() const { return v_.get_d(); }

  // Natural log evaluated in extended precision; exact inputs of any
  // magnitude are handled via mantissa/exponent splitting. Requires value > 0.
  long double log() const {
    if (sign() <= 0) throw DomainError("rational: log of non-positive value");
    return log_abs(v_.get_num()) - log_abs(v_.get_den());
  }

  static Rational pow2(unsigned long k) {
    mpz_class n = 1;
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), k);
    return Rational(std::move(n), 1);
  }

  const mpq_class& raw() const { return v_; }

 private:
  static long double log_abs(const mpz_class& z) {
    signed long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(std::fabs(static_cast<long double>(mant))) +
           static_cast<long double>(exp) * 0.693147180559945309417232121458L;
  }

  mpq_class v_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace fairdisc
