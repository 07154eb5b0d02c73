#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "fairdisc/errors.hpp"
#include "fairdisc/rational.hpp"

namespace fairdisc {

// Exact value of the form a + b*sqrt(D) with rational a, b and a fixed
// nonnegative rational radicand D. Closed under +, -, * (same D), and
// admits exact sign tests, so inequalities between threshold expressions
// like m/k - sqrt(m/k) can be decided with zero tolerance.
class Quadratic {
 public:
  Quadratic() : a_(0), b_(0), d_(0) {}

  // The rational value `a` viewed inside the field with radicand D.
  Quadratic(Rational a, Rational radicand)
      : a_(std::move(a)), b_(0), d_(std::move(radicand)) {
    check_radicand();
  }
  Quadratic(Rational a, Rational b, Rational radicand)
      : a_(std::move(a)), b_(std::move(b)), d_(std::move(radicand)) {
    check_radicand();
  }

  // sqrt(radicand) itself.
  static Quadratic root(const Rational& radicand) {
    return Quadratic(Rational(0), Rational(1), radicand);
  }

  const Rational& rational_part() const { return a_; }
  const Rational& root_coefficient() const { return b_; }
  const Rational& radicand() const { return d_; }

  Quadratic operator-() const { return Quadratic(-a_, -b_, d_); }
  Quadratic operator+(const Quadratic& o) const {
    check_same(o);
    return Quadratic(a_ + o.a_, b_ + o.b_, d_);
  }
  Quadratic operator-(const Quadratic& o) const {
    check_same(o);
    return Quadratic(a_ - o.a_, b_ - o.b_, d_);
  }
  Quadratic operator*(const Quadratic& o) const {
    check_same(o);
    return Quadratic(a_ * o.a_ + b_ * o.b_ * d_, a_ * o.b_ + b_ * o.a_, d_);
  }
  Quadratic operator/(const Quadratic& o) const {
    check_same(o);
    const Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * d_;
    if (norm.sign() == 0) {
      // a^2 == b^2 D: sqrt(D) is rational here (|a/b| when b != 0), so the
      // divisor collapses to a plain rational value.
      const Rational root = o.b_.sign() == 0 ? Rational(0) : (o.a_ / o.b_).abs();
      const Rational value = o.a_ + o.b_ * root;
      if (value.sign() == 0) throw ParameterError("quadratic: division by zero");
      return *this / value;
    }
    const Quadratic conj(o.a_, -o.b_, d_);
    return (*this * conj) / norm;
  }
  Quadratic operator*(const Rational& r) const { return Quadratic(a_ * r, b_ * r, d_); }
  Quadratic operator/(const Rational& r) const { return Quadratic(a_ / r, b_ / r, d_); }
  Quadratic operator+(const Rational& r) const { return Quadratic(a_ + r, b_, d_); }
  Quadratic operator-(const Rational& r) const { return Quadratic(a_ - r, b_, d_); }

  // Exact sign of a + b*sqrt(D).
  int sign() const {
    const int sa = a_.sign();
    const int sb = d_.sign() == 0 ? 0 : b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 against b^2 * D.
    const int cmp = (a_ * a_ < b_ * b_ * d_) ? -1 : ((a_ * a_ == b_ * b_ * d_) ? 0 : 1);
    // |a| dominates -> sign(a); |b|sqrt(D) dominates -> sign(b).
    if (cmp == 0) return 0;
    return cmp > 0 ? sa : sb;
  }

  bool operator==(const Quadratic& o) const { return (*this - o).sign() == 0; }
  bool operator<(const Quadratic& o) const { return (*this - o).sign() < 0; }
  bool operator<=(const Quadratic& o) const { return (*this - o).sign() <= 0; }
  bool operator>(const Quadratic& o) const { return (*this - o).sign() > 0; }
  bool operator>=(const Quadratic& o) const { return (*this - o).sign() >= 0; }

  // Largest integer <= value; exact. Starts from a float estimate and
  // corrects with exact comparisons.
  mpz_class floor() const {
    mpz_class g(static_cast<long>(std::floor(to_longdouble())));
    while (Quadratic(Rational(mpz_class(g + 1), mpz_class(1)), d_) <= *this) ++g;
    while (Quadratic(Rational(g, mpz_class(1)), d_) > *this) --g;
    return g;
  }
  mpz_class ceil() const { return -((-*this).floor()); }

  long double to_longdouble() const {
    return static_cast<long double>(a_.to_double()) +
           static_cast<long double>(b_.to_double()) *
               sqrtl(static_cast<long double>(d_.to_double()));
  }

  std::string str() const {
    return a_.str() + " + " + b_.str() + "*sqrt(" + d_.str() + ")";
  }

 private:
  void check_radicand() const {
    if (d_.sign() < 0) throw DomainError("quadratic: negative radicand");
  }
  void check_same(const Quadratic& o) const {
    if (!(d_ == o.d_))
      throw DimensionError("quadratic: mixed radicands " + d_.str() + " vs " + o.d_.str());
  }

  Rational a_, b_, d_;
};

inline std::ostream& operator<<(std::ostream& os, const Quadratic& q) {
  return os << q.str();
}

}  // namespace fairdisc
