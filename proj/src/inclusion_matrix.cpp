#include "summinc/inclusion_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace summinc {

namespace {
// Both products stay comfortably inside double range below this log bound.
constexpr double kLinearSafeLog = 650.0;
}  // namespace

SignedLog weighted_pivot(const CumulativeView& cp, const CumulativeView& cq, long v) {
  const double log_a = cp.log_p(v) + cq.log_partial_sum(v);   // log(p_v Q_v)
  const double log_b = cq.log_p(v) + cp.log_partial_sum(v);   // log(q_v P_v)
  if (log_a < kLinearSafeLog && log_b < kLinearSafeLog && log_a > -kLinearSafeLog &&
      log_b > -kLinearSafeLog) {
    return SignedLog::from_double(diff_of_products(
        cp.p(v), cq.partial_sum(v), cq.p(v), cp.partial_sum(v)));
  }
  return log_diff_exp(log_a, log_b);
}

InclusionMatrix InclusionMatrix::build(const WeightSequence& p,
                                       const WeightSequence& q,
                                       const ExponentPair& exp, long n) {
  if (n < 1) throw ValidationError("inclusion matrix: size must be >= 1");
  InclusionMatrix m(n, exp);
  const CumulativeView cp(p, n);
  const CumulativeView cq(q, n);
  const double k = exp.k();
  const double s = exp.s();

  m.b_.resize(static_cast<std::size_t>(n));
  m.c_.resize(static_cast<std::size_t>(n));
  m.d_.resize(static_cast<std::size_t>(n));
  for (long i = 1; i <= n; ++i) {
    const double ln_i = std::log(static_cast<double>(i));
    const std::size_t j = static_cast<std::size_t>(i - 1);
    m.b_[j] = SignedLog::positive((1.0 - 1.0 / s) * ln_i + cq.log_p(i) -
                                  cq.log_partial_sum(i) - cq.log_partial_sum(i - 1));
    const SignedLog pivot = weighted_pivot(cp, cq, i);
    // c_v = (Q_v - q_v P_v/p_v) / v^{1-1/k} = pivot / (p_v v^{1-1/k}).
    m.c_[j] = pivot.is_zero()
                  ? SignedLog::zero()
                  : SignedLog{pivot.log - cp.log_p(i) - (1.0 - 1.0 / k) * ln_i,
                              pivot.sign};
    m.d_[j] = SignedLog::positive((1.0 / k - 1.0 / s) * ln_i + cq.log_p(i) +
                                  cp.log_partial_sum(i) - cp.log_p(i) -
                                  cq.log_partial_sum(i));
  }
  return m;
}

std::size_t InclusionMatrix::idx(long i) const {
  if (i < 1 || i > n_) {
    throw RangeError("inclusion matrix: index " + std::to_string(i) +
                     " outside [1, " + std::to_string(n_) + "]");
  }
  return static_cast<std::size_t>(i - 1);
}

SignedLog InclusionMatrix::entry_log(long row, long col) const {
  idx(row);
  idx(col);
  if (col > row) return SignedLog::zero();
  if (col == row) return d_[idx(row)];
  return b_[idx(row)] * c_[idx(col)];
}

double InclusionMatrix::entry(long row, long col) const {
  const SignedLog e = entry_log(row, col);
  if (e.is_zero()) return 0.0;
  return e.to_double_checked("inclusion matrix entry");
}

std::vector<double> InclusionMatrix::apply(std::span<const double> x) const {
  if (static_cast<long>(x.size()) != n_) {
    throw ValidationError("inclusion matrix apply: expected " + std::to_string(n_) +
                          " coordinates, got " + std::to_string(x.size()));
  }
  std::vector<double> y(x.size(), 0.0);
  ScaledSum prefix;  // sum over v < n of c_v x_v
  for (long i = 1; i <= n_; ++i) {
    const std::size_t j = static_cast<std::size_t>(i - 1);
    double v = prefix.value_times(b_[j]);
    if (!d_[j].is_zero() && x[j] != 0.0) {
      v += d_[j].to_double() * x[j];
    }
    y[j] = v;
    prefix.add_product(c_[j], x[j]);
  }
  return y;
}

std::vector<double> InclusionMatrix::apply_transpose(std::span<const double> x) const {
  if (static_cast<long>(x.size()) != n_) {
    throw ValidationError("inclusion matrix apply: expected " + std::to_string(n_) +
                          " coordinates, got " + std::to_string(x.size()));
  }
  std::vector<double> y(x.size(), 0.0);
  ScaledSum suffix;  // sum over n > v of b_n x_n
  for (long i = n_; i >= 1; --i) {
    const std::size_t j = static_cast<std::size_t>(i - 1);
    double v = suffix.value_times(c_[j]);
    if (!d_[j].is_zero() && x[j] != 0.0) {
      v += d_[j].to_double() * x[j];
    }
    y[j] = v;
    suffix.add_product(b_[j], x[j]);
  }
  return y;
}

std::pair<InclusionMatrix, InclusionMatrix> InclusionMatrix::split() const {
  InclusionMatrix lower(n_, exp_);
  lower.b_ = b_;
  lower.c_ = c_;
  lower.d_.assign(static_cast<std::size_t>(n_), SignedLog::zero());
  InclusionMatrix diag(n_, exp_);
  diag.b_.assign(static_cast<std::size_t>(n_), SignedLog::zero());
  diag.c_.assign(static_cast<std::size_t>(n_), SignedLog::zero());
  diag.d_ = d_;
  return {std::move(lower), std::move(diag)};
}

void InclusionMatrix::dump_dense_csv(std::ostream& os) const {
  if (n_ > 100) {
    throw ValidationError("dense csv dump is capped at N <= 100; requested " +
                          std::to_string(n_));
  }
  os << "row,col,value\n";
  char buf[64];
  for (long r = 1; r <= n_; ++r) {
    for (long c = 1; c <= r; ++c) {
      const SignedLog e = entry_log(r, c);
      std::snprintf(buf, sizeof(buf), "%.17g", e.to_double());
      os << r << ',' << c << ',' << buf << '\n';
    }
  }
}

}  // namespace summinc
