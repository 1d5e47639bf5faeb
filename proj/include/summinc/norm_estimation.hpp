#pragma once

// Empirical estimation of finite-section operator norms from l^k to l^s.
// The estimator runs a dual power iteration (steepest-ascent on ||Ax||_s
// over the unit ball of l^k) from several deterministic starting vectors
// plus seeded random restarts, and keeps the best stationary value found.
// For k < s the problem is not convex in general, so the result is a lower
// bound on the true section norm; restarts make it a sharp one in practice.

#include <cstdint>
#include <span>
#include <vector>

#include "summinc/exponents.hpp"
#include "summinc/inclusion_matrix.hpp"
#include "summinc/weights.hpp"

namespace summinc {

/// l^p norm, computed in log domain so that entries near the double
/// overflow/underflow boundaries are handled gracefully.
double lp_norm(std::span<const double> x, double p);

struct PowerIterationOptions {
  int max_iterations = 500;
  double relative_tolerance = 1e-8;
  int stable_iterations = 3;  // consecutive in-tolerance steps to converge
};

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;  // summed over all starts
  int restarts = 0;    // total starting vectors tried
  std::uint64_t seed = 0;
  bool converged = false;  // whether the winning start converged
  std::vector<double> witness;  // unit vector in l^k with ||A w||_s = value
};

/// A finite square section of a linear operator.
class SectionOperator {
 public:
  virtual ~SectionOperator() = default;
  virtual long size() const = 0;
  virtual std::vector<double> apply(std::span<const double> x) const = 0;
  virtual std::vector<double> apply_transpose(
      std::span<const double> x) const = 0;
  /// 0-based coordinate indices worth trying as unit-vector starts.
  virtual std::vector<long> start_hints() const { return {}; }
};

/// Section backed by an inclusion matrix; applications run in O(n).
class FactorableSection final : public SectionOperator {
 public:
  explicit FactorableSection(InclusionMatrix m);

  const InclusionMatrix& matrix() const { return m_; }

  long size() const override { return m_.size(); }
  std::vector<double> apply(std::span<const double> x) const override {
    return m_.apply(x);
  }
  std::vector<double> apply_transpose(
      std::span<const double> x) const override {
    return m_.apply_transpose(x);
  }
  std::vector<long> start_hints() const override { return hints_; }

 private:
  InclusionMatrix m_;
  std::vector<long> hints_;
};

/// Explicitly stored matrix section; used for cross-checks against dense
/// reference computations.
class DenseSection final : public SectionOperator {
 public:
  DenseSection(long n, std::vector<double> row_major);

  double entry(long row, long col) const;  // 0-based

  long size() const override { return n_; }
  std::vector<double> apply(std::span<const double> x) const override;
  std::vector<double> apply_transpose(
      std::span<const double> x) const override;

 private:
  long n_;
  std::vector<double> a_;
};

/// Best l^k -> l^s Rayleigh value found over all starts: warm starts first,
/// then the uniform-mass vector, the operator's hinted unit vectors, and
/// `random_restarts` seeded random sign vectors. Deterministic for a fixed
/// operator, exponents, seed, and option set.
NormEstimate estimate_norm(
    const SectionOperator& op, const ExponentPair& exp,
    int random_restarts = 8, std::uint64_t seed = 123456789,
    const PowerIterationOptions& opts = {},
    std::span<const std::vector<double>> warm_starts = {});

struct ProfilePoint {
  long section = 0;
  double estimate = 0.0;
  double growth_ratio = 0.0;  // estimate / previous estimate; 0 at the first
  int iterations = 0;
  bool converged = false;
};

/// Norm estimates of the inclusion matrix sections at increasing sizes.
/// Each section warm-starts from the previous witness (zero-padded), which
/// makes the estimates monotone nondecreasing and the growth ratios a
/// trustworthy boundedness signal.
std::vector<ProfilePoint> norm_growth_profile(
    const WeightSequence& p, const WeightSequence& q, const ExponentPair& exp,
    std::span<const long> sections, int random_restarts = 8,
    std::uint64_t seed = 123456789, const PowerIterationOptions& opts = {});

}  // namespace summinc
