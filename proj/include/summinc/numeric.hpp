#pragma once

// Low-level numeric kernels shared by every module: compensated summation,
// log-domain arithmetic, and a sign-plus-log-magnitude scalar type used to
// evaluate products and sums whose factors overflow or underflow doubles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "summinc/errors.hpp"

namespace summinc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Kahan compensated accumulator.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

/// log(e^a + e^b), tolerant of -inf on either side.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

/// log(1 - e^{-d}) for d > 0, split at ln 2 for accuracy.
inline double log1m_exp_neg(double d) {
  constexpr double kLn2 = 0.6931471805599453;
  return d > kLn2 ? std::log1p(-std::exp(-d)) : std::log(-std::expm1(-d));
}

/// a*b - c*d with one FMA compensation step. Accurate to a couple of ulp
/// even when the two products nearly cancel.
inline double diff_of_products(double a, double b, double c, double d) {
  const double w = c * d;
  const double e = std::fma(c, d, -w);
  const double f = std::fma(a, b, -w);
  return f - e;
}

/// Scalar stored as sign * exp(log). sign == 0 encodes exact zero.
struct SignedLog {
  double log = kNegInf;
  int sign = 0;

  static SignedLog zero() { return {}; }
  static SignedLog positive(double lg) { return {lg, 1}; }

  static SignedLog from_double(double x) {
    if (x == 0.0) return {};
    return {std::log(std::fabs(x)), x > 0.0 ? 1 : -1};
  }

  bool is_zero() const { return sign == 0; }

  /// Linear value; overflows to +-inf or underflows to 0 silently.
  double to_double() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log);
  }

  /// Linear value with loud failure when not representable.
  double to_double_checked(const char* what) const {
    if (sign == 0) return 0.0;
    const double v = to_double();
    if (!std::isfinite(v) || v == 0.0) {
      throw OverflowError(std::string(what) +
                          ": value with log magnitude " + std::to_string(log) +
                          " is outside double range; use log-domain access");
    }
    return v;
  }

  friend SignedLog operator*(SignedLog a, SignedLog b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.log + b.log, a.sign * b.sign};
  }
};

/// sign(e^a - e^b) together with log|e^a - e^b| for finite a, b.
inline SignedLog log_diff_exp(double a, double b) {
  if (a == b) return SignedLog::zero();
  if (a == kNegInf) return {b, -1};
  if (b == kNegInf) return {a, 1};
  const double hi = std::max(a, b);
  const double d = hi - std::min(a, b);
  return {hi + log1m_exp_neg(d), a > b ? 1 : -1};
}

/// Accumulates sums of SignedLog terms as (acc + comp) * e^{scale} with a
/// Kahan-compensated mantissa. The scale refolds lazily, so sums whose terms
/// span thousands of orders of magnitude stay representable while ordinary
/// desk-scale sums go through plain compensated adds.
class ScaledSum {
 public:
  void add(SignedLog t) {
    if (t.sign == 0 || t.log == kNegInf) return;
    if (scale_ == kNegInf) {
      scale_ = t.log;
      acc_.add(static_cast<double>(t.sign));
      return;
    }
    const double d = t.log - scale_;
    if (d > kRefold) {
      // Incoming term dwarfs the current scale: rebase onto the new term.
      const double shrink = std::exp(-d);
      acc_.sum *= shrink;
      acc_.comp *= shrink;
      scale_ = t.log;
      acc_.add(static_cast<double>(t.sign));
    } else {
      acc_.add(t.sign * std::exp(d));
    }
    normalize();
  }

  void add_product(SignedLog c, double x) {
    if (c.sign == 0 || x == 0.0) return;
    SignedLog t{c.log + std::log(std::fabs(x)), x > 0.0 ? c.sign : -c.sign};
    add(t);
  }

  SignedLog value_log() const {
    const double v = acc_.value();
    if (scale_ == kNegInf || v == 0.0) return SignedLog::zero();
    return {scale_ + std::log(std::fabs(v)), v > 0.0 ? 1 : -1};
  }

  /// this_value * sign * e^{extra_log} as a double, routed through whichever
  /// factorization stays in range.
  double value_times(SignedLog f) const {
    const double v = acc_.value();
    if (f.sign == 0 || scale_ == kNegInf || v == 0.0) return 0.0;
    const double e = f.log + scale_;
    double out;
    if (e > -690.0 && e < 690.0) {
      out = v * std::exp(e);
    } else {
      const double lg = e + std::log(std::fabs(v));
      out = std::copysign(std::exp(lg), v);
    }
    return f.sign > 0 ? out : -out;
  }

  bool is_zero() const { return scale_ == kNegInf || acc_.value() == 0.0; }

 private:
  static constexpr double kRefold = 400.0;

  void normalize() {
    const double v = acc_.value();
    if (v == 0.0) {
      scale_ = kNegInf;
      acc_ = {};
      return;
    }
    const double a = std::fabs(v);
    if (a > 1e150 || a < 1e-150) {
      const double lg = std::log(a);
      scale_ += lg;
      acc_ = {};
      acc_.add(v > 0.0 ? 1.0 : -1.0);
    }
  }

  double scale_ = kNegInf;
  KahanSum acc_;
};

/// Streaming log-sum-exp over nonnegative terms supplied in log domain.
class LogSumExp {
 public:
  void add_log(double t) { sum_.add(SignedLog::positive(t)); }
  void add_zero() {}
  double log_value() const {
    const SignedLog v = sum_.value_log();
    return v.sign == 0 ? kNegInf : v.log;
  }

 private:
  ScaledSum sum_;
};

}  // namespace summinc
