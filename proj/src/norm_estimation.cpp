#include "summinc/norm_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "summinc/errors.hpp"
#include "summinc/numeric.hpp"
#include "summinc/series.hpp"

namespace summinc {

double lp_norm(std::span<const double> x, double p) {
  if (!std::isfinite(p) || !(p >= 1.0))
    throw ValidationError("norm exponent must be finite and >= 1");
  LogSumExp acc;
  bool any = false;
  for (const double xi : x) {
    if (xi == 0.0) continue;
    if (std::isinf(xi)) return kPosInf;
    acc.add_log(p * std::log(std::fabs(xi)));
    any = true;
  }
  if (!any) return 0.0;
  return std::exp(acc.log_value() / p);
}

namespace {

/// w_i = sign(u_i) * (|u_i| / norm)^{power}. Every |u_i| <= norm in the
/// callers, so the log-domain evaluation never overflows.
std::vector<double> normalized_dual(std::span<const double> u, double norm,
                                    double power) {
  std::vector<double> w(u.size(), 0.0);
  const double log_norm = std::log(norm);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    const double lg = power * (std::log(std::fabs(u[i])) - log_norm);
    w[i] = std::copysign(std::exp(lg), u[i]);
  }
  return w;
}

struct RunOutcome {
  double value = 0.0;
  std::vector<double> witness;
  bool converged = false;
  int iterations = 0;
};

/// One ascent run: x -> dual of A^T (dual of A x). The Rayleigh value
/// ||Ax||_s is nondecreasing for entrywise-nonnegative sections; with mixed
/// signs it can dip, so the best (value, witness) pair seen is kept.
RunOutcome run_power_iteration(const SectionOperator& op,
                               const ExponentPair& exp, std::vector<double> x,
                               const PowerIterationOptions& opts) {
  RunOutcome out;
  const double k = exp.k();
  const double s = exp.s();
  const double kstar = exp.kstar();

  const double start_norm = lp_norm(x, k);
  if (!(start_norm > 0.0) || !std::isfinite(start_norm)) {
    out.witness = std::move(x);
    out.converged = true;
    return out;
  }
  for (double& xi : x) xi /= start_norm;
  out.witness = x;

  double prev = -1.0;
  int stable = 0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    ++out.iterations;
    const std::vector<double> y = op.apply(x);
    const double g = lp_norm(y, s);
    if (!std::isfinite(g)) {
      // The section genuinely overflows on a unit vector; report that.
      out.value = g;
      out.witness = std::move(x);
      out.converged = true;
      return out;
    }
    if (g > out.value) {
      out.value = g;
      out.witness = x;
    }
    if (g == 0.0) {
      out.converged = true;
      return out;
    }
    if (prev >= 0.0 && std::fabs(g - prev) <= opts.relative_tolerance * g) {
      if (++stable >= opts.stable_iterations) {
        out.converged = true;
        return out;
      }
    } else {
      stable = 0;
    }
    prev = g;

    const std::vector<double> z = normalized_dual(y, g, s - 1.0);
    const std::vector<double> u = op.apply_transpose(z);
    const double h = lp_norm(u, kstar);
    if (!(h > 0.0) || !std::isfinite(h)) {
      out.converged = true;
      return out;
    }
    x = normalized_dual(u, h, kstar - 1.0);
    const double drift = lp_norm(x, k);
    if (!(drift > 0.0) || !std::isfinite(drift)) {
      out.converged = true;
      return out;
    }
    for (double& xi : x) xi /= drift;
  }
  return out;
}

}  // namespace

FactorableSection::FactorableSection(InclusionMatrix m) : m_(std::move(m)) {
  std::vector<std::pair<double, long>> diag;
  for (long i = 1; i <= m_.size(); ++i) {
    const SignedLog d = m_.diag_factor(i);
    if (!d.is_zero()) diag.push_back({d.log, i - 1});
  }
  std::sort(diag.begin(), diag.end(),
            [](const std::pair<double, long>& a,
               const std::pair<double, long>& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  const std::size_t count = std::min<std::size_t>(diag.size(), 3);
  for (std::size_t i = 0; i < count; ++i) hints_.push_back(diag[i].second);
}

DenseSection::DenseSection(long n, std::vector<double> row_major)
    : n_(n), a_(std::move(row_major)) {
  if (n_ <= 0) throw ValidationError("dense section size must be positive");
  if (a_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_))
    throw ValidationError("dense section needs exactly n*n entries");
  for (const double v : a_) {
    if (!std::isfinite(v))
      throw ValidationError("dense section entries must be finite");
  }
}

double DenseSection::entry(long row, long col) const {
  if (row < 0 || row >= n_ || col < 0 || col >= n_)
    throw RangeError("dense section index out of range");
  return a_[static_cast<std::size_t>(row) * static_cast<std::size_t>(n_) +
            static_cast<std::size_t>(col)];
}

std::vector<double> DenseSection::apply(std::span<const double> x) const {
  if (static_cast<long>(x.size()) != n_)
    throw ValidationError("dense section apply: wrong vector length");
  std::vector<double> y(x.size(), 0.0);
  for (long i = 0; i < n_; ++i) {
    KahanSum row;
    const double* a = a_.data() + static_cast<std::size_t>(i) * n_;
    for (long j = 0; j < n_; ++j) row.add(a[j] * x[static_cast<std::size_t>(j)]);
    y[static_cast<std::size_t>(i)] = row.value();
  }
  return y;
}

std::vector<double> DenseSection::apply_transpose(
    std::span<const double> x) const {
  if (static_cast<long>(x.size()) != n_)
    throw ValidationError("dense section apply: wrong vector length");
  std::vector<double> y(x.size(), 0.0);
  for (long j = 0; j < n_; ++j) {
    KahanSum col;
    for (long i = 0; i < n_; ++i)
      col.add(a_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)] *
              x[static_cast<std::size_t>(i)]);
    y[static_cast<std::size_t>(j)] = col.value();
  }
  return y;
}

NormEstimate estimate_norm(const SectionOperator& op, const ExponentPair& exp,
                           int random_restarts, std::uint64_t seed,
                           const PowerIterationOptions& opts,
                           std::span<const std::vector<double>> warm_starts) {
  const long n = op.size();
  if (n <= 0) throw ValidationError("section size must be positive");
  if (random_restarts < 0)
    throw ValidationError("restart count must be nonnegative");
  if (opts.max_iterations < 1 || opts.stable_iterations < 1 ||
      !(opts.relative_tolerance > 0.0))
    throw ConfigError("power iteration options out of range");

  std::vector<std::vector<double>> starts;
  for (const std::vector<double>& w : warm_starts) {
    if (static_cast<long>(w.size()) != n) {
      throw ValidationError("warm start has length " +
                            std::to_string(w.size()) + ", section needs " +
                            std::to_string(n));
    }
    starts.push_back(w);
  }
  starts.emplace_back(static_cast<std::size_t>(n), 1.0);
  for (const long h : op.start_hints()) {
    if (h < 0 || h >= n) continue;
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(h)] = 1.0;
    starts.push_back(std::move(e));
  }
  for (int r = 0; r < random_restarts; ++r) {
    std::mt19937_64 gen(seed + static_cast<std::uint64_t>(r));
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& vi : v) vi = uniform01(gen) < 0.5 ? -1.0 : 1.0;
    starts.push_back(std::move(v));
  }

  NormEstimate best;
  best.seed = seed;
  for (std::vector<double>& start : starts) {
    RunOutcome run = run_power_iteration(op, exp, std::move(start), opts);
    best.iterations += run.iterations;
    ++best.restarts;
    if (best.witness.empty() || run.value > best.value) {
      best.value = run.value;
      best.converged = run.converged;
      best.witness = std::move(run.witness);
    }
  }
  return best;
}

std::vector<ProfilePoint> norm_growth_profile(const WeightSequence& p,
                                              const WeightSequence& q,
                                              const ExponentPair& exp,
                                              std::span<const long> sections,
                                              int random_restarts,
                                              std::uint64_t seed,
                                              const PowerIterationOptions& opts) {
  if (sections.empty())
    throw ValidationError("profile needs at least one section size");
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (sections[i] < 1)
      throw ValidationError("section sizes must be positive");
    if (i > 0 && sections[i] <= sections[i - 1])
      throw ValidationError("section sizes must be strictly increasing");
  }

  std::vector<ProfilePoint> out;
  std::vector<double> carried;
  double prev_estimate = 0.0;
  for (const long n : sections) {
    const FactorableSection section(InclusionMatrix::build(p, q, exp, n));
    std::vector<std::vector<double>> warm;
    if (!carried.empty()) {
      std::vector<double> padded = carried;
      padded.resize(static_cast<std::size_t>(n), 0.0);
      warm.push_back(std::move(padded));
    }
    NormEstimate est =
        estimate_norm(section, exp, random_restarts, seed, opts, warm);
    ProfilePoint pt;
    pt.section = n;
    pt.estimate = est.value;
    pt.growth_ratio = prev_estimate > 0.0 ? est.value / prev_estimate : 0.0;
    pt.iterations = est.iterations;
    pt.converged = est.converged;
    out.push_back(pt);
    carried = std::move(est.witness);
    prev_estimate = est.value;
  }
  return out;
}

}  // namespace summinc
