#pragma once

// Positive weight sequences p_0, p_1, ... and their cumulative sums
// P_n = p_0 + ... + p_n. Every family exposes exact log-domain closed forms
// so downstream code can work scale-free; linear accessors fail loudly once
// a quantity leaves double range.
//
// Indexing is 0-based throughout: P_0 = p_0.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "summinc/errors.hpp"
#include "summinc/numeric.hpp"

namespace summinc {

enum class WeightKind { Constant, Power, Geometric, Exponential, Explicit };

std::string to_string(WeightKind k);

class WeightSequence {
 public:
  /// p_n = 1.
  static WeightSequence constant(long offset = 0);
  /// p_n = (n + offset)^exponent; requires n + offset > 0 at evaluation.
  static WeightSequence power(double exponent, long offset = 0);
  /// p_n = ratio^{n + offset}, ratio > 0.
  static WeightSequence geometric(double ratio, long offset = 0);
  /// p_n = exp(rate * (n + offset)).
  static WeightSequence exponential(double rate, long offset = 0);
  /// p_n = values[n + offset]; every entry must be positive and finite.
  static WeightSequence explicit_values(std::vector<double> values,
                                        long offset = 0);

  WeightKind kind() const { return kind_; }
  double param() const { return param_; }
  long offset() const { return offset_; }
  const std::vector<double>& values() const { return values_; }

  /// Largest index n for which value(n) is defined (explicit lists only;
  /// unbounded families report std::numeric_limits<long>::max()).
  long max_index() const;

  /// p_n in linear domain; throws OverflowError when the true value is
  /// positive but not representable as a positive double.
  double value(long n) const;

  /// ln p_n via the family's closed form.
  double log_value(long n) const;

  std::string describe() const;

  bool operator==(const WeightSequence& o) const = default;

  static WeightSequence from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  /// One positive real per line; blank lines ignored.
  static WeightSequence from_csv(std::istream& in);

 private:
  WeightSequence(WeightKind kind, double param, long offset,
                 std::vector<double> values);
  void check_index(long n) const;

  WeightKind kind_;
  double param_;
  long offset_;
  std::vector<double> values_;
};

/// Eagerly materialized cumulative data for one weight sequence over
/// 0..n_max. Immutable after construction, so concurrent reads are safe.
class CumulativeView {
 public:
  CumulativeView(const WeightSequence& w, long n_max);

  long max_index() const { return n_max_; }
  const WeightSequence& weights() const { return w_; }

  double p(long n) const;
  double log_p(long n) const { return logp_.at(checked(n)); }

  /// P_n by compensated linear summation; loud on overflow.
  double partial_sum(long n) const;
  /// ln P_n by running log-sum-exp.
  double log_partial_sum(long n) const { return logP_.at(checked(n)); }

  /// P_n / p_n via the forward recurrence
  ///   r_0 = 1,  r_n = 1 + (p_{n-1}/p_n) r_{n-1},
  /// which only touches scale-free ratios. Loud on overflow.
  double ratio_P_over_p(long n) const;
  /// ln(P_n / p_n) via the same recurrence carried in log domain.
  double log_ratio_P_over_p(long n) const { return logratio_.at(checked(n)); }

 private:
  long checked(long n) const;

  WeightSequence w_;
  long n_max_;
  std::vector<double> logp_;
  std::vector<double> logP_;
  std::vector<double> plin_;      // linear p_n, may be 0 or +inf out of range
  std::vector<double> psum_;      // linear P_n, +inf once overflowed
  std::vector<double> ratio_;     // linear P_n/p_n, +inf once overflowed
  std::vector<double> logratio_;
};

/// One-shot helpers for small n (they do not retain a cache).
double partial_sum(const WeightSequence& w, long n);
double log_partial_sum(const WeightSequence& w, long n);
double ratio_P_over_p(const WeightSequence& w, long n);

}  // namespace summinc
