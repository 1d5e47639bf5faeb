#pragma once

// Numerical decision layer. Each boundedness condition is sampled on a
// geometric grid of cut points m, the growth trend of the samples is fitted
// in log-log coordinates, and the fitted exponent is compared against the
// condition's target (0 for O(1) conditions, 1 for the O(m) condition).
//
// The theorem-level check for "every series summable by the (p, k) method is
// summable by the (q, s) method" combines
//   (i)  sup_n  n^{1/k-1/s} q_n P_n / (p_n Q_n) < infinity, and
//   (ii) sup_m (sum_{n>=m} b_n^s)^{1/s} (sum_{v<=m} |Q_v - q_v P_v/p_v|^{k*}/v)^{1/k*}
//        < infinity,  b_n = n^{1-1/s} q_n/(Q_n Q_{n-1}),
// with the corollary forms specializing one of the weight sequences.

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "summinc/exponents.hpp"
#include "summinc/inclusion_matrix.hpp"
#include "summinc/weights.hpp"

namespace summinc {

enum class ConditionId {
  ThmI, ThmII,
  Cor1I, Cor1II,
  Cor2I, Cor2II,
  Cor3I, Cor3II,
  Cor4Direct, Cor4Reverse,  // n p_n / P_n = O(1) and P_n/(n p_n) = O(1)
};

enum class Verdict { Bounded, Unbounded, Inconclusive };
enum class Overall { Implies, DoesNotImply, Inconclusive };

std::string to_string(ConditionId id);
std::string to_string(Verdict v);
std::string to_string(Overall o);

struct ConditionSample {
  long m = 0;
  double value = 0.0;      // exp(log_value); may underflow to 0 or overflow to inf
  double log_value = 0.0;  // authoritative
};

struct ConditionReport {
  ConditionId id = ConditionId::ThmI;
  std::vector<ConditionSample> samples;
  double fitted_exponent = 0.0;  // least-squares slope of log E vs log m, upper half
  double target_exponent = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double sup_estimate = 0.0;
  double sup_estimate_log = kNegInf;
  std::string tail_note;
};

struct InclusionVerdict {
  ConditionReport condition_i;
  ConditionReport condition_ii;
  Overall overall = Overall::Inconclusive;
};

struct Grid {
  std::vector<long> points;  // strictly increasing, all >= 1

  static Grid log2_default();  // 16, 32, ..., 4096
  long max() const { return points.back(); }
  void validate() const;
};

struct CriteriaConfig {
  Grid grid = Grid::log2_default();
  long tail_limit = 0;           // 0 -> 4 * grid.max()
  double bounded_slack = 0.1;    // Bounded iff fitted <= target + bounded_slack
  double unbounded_slack = 0.3;  // Unbounded iff fitted >= target + unbounded_slack

  long resolved_tail_limit() const {
    return tail_limit > 0 ? tail_limit : 4 * grid.max();
  }
};

/// Least-squares slope of y against x. Returns 0 when fewer than two finite
/// points are available (constant-zero curves classify as Bounded).
double fit_slope(const std::vector<std::pair<double, double>>& xy);

/// Builds a report from raw samples: fits log value against log m over the
/// upper half of the grid and classifies against the target exponent.
ConditionReport classify_condition(ConditionId id,
                                   std::vector<ConditionSample> samples,
                                   double target_exponent,
                                   const CriteriaConfig& cfg,
                                   std::string tail_note = {});

/// Condition (i) of the theorem on the given grid of n.
ConditionReport eval_condition_i(const WeightSequence& p, const WeightSequence& q,
                                 const ExponentPair& exp,
                                 const CriteriaConfig& cfg = {});

/// Condition (ii) of the theorem: E(m) sampled at the grid points with the
/// first factor summed to the tail limit plus a geometric tail estimate.
/// Requires resolved_tail_limit() >= 4 * grid.max().
ConditionReport eval_condition_ii(const WeightSequence& p, const WeightSequence& q,
                                  const ExponentPair& exp,
                                  const CriteriaConfig& cfg = {});

/// Both conditions plus the combined verdict.
InclusionVerdict evaluate_inclusion(const WeightSequence& p, const WeightSequence& q,
                                    const ExponentPair& exp,
                                    const CriteriaConfig& cfg = {});

/// Corollary evaluators. The fixed sequence of each corollary is enforced:
///   1: p must be constant (source method is the plain arithmetic mean);
///   2: q must be constant;
///   3: requires s == k;
///   4: requires s == k and q == p; reports the two ratio conditions
///      n p_n / P_n = O(1) and P_n / (n p_n) = O(1), overall Implies meaning
///      the two methods are equivalent.
InclusionVerdict eval_corollary(int which, const WeightSequence& p,
                                const WeightSequence& q, const ExponentPair& exp,
                                const CriteriaConfig& cfg = {});

/// Boundedness test for an abstract factorable lower-triangular matrix with
/// entries |row_factor(n)| * |col_factor(v)|, v < n, acting from l^k to l^s:
///   sup_m (sum_{n>=m} b_n^s)^{1/s} (sum_{v<=m} |c_v|^{k*})^{1/k*} < infinity.
ConditionReport bennett_factorable_bound(
    const std::function<SignedLog(long)>& row_factor,
    const std::function<SignedLog(long)>& col_factor, const ExponentPair& exp,
    const CriteriaConfig& cfg = {});

/// Same test applied to the strictly-lower part of an inclusion matrix.
/// The matrix must cover indices up to the tail limit.
ConditionReport bennett_factorable_bound(const InclusionMatrix& lower,
                                         const ExponentPair& exp,
                                         const CriteriaConfig& cfg = {});

/// One fitted bound inside a worked-example reproduction.
struct BoundFit {
  std::string name;
  std::vector<ConditionSample> samples;
  std::string fit_axis;       // "m", "log m", "log log m"
  double fitted = 0.0;
  double target = 0.0;
  double tolerance = 0.0;     // absolute, on the fitted exponent
  bool pass_two_sided = false;   // |fitted - target| <= tolerance
  bool pass_upper = false;       // fitted <= target + tolerance (claim holds)
  double ratio_spread = 0.0;     // max/min of samples against the reference curve
  std::string reference;         // reference curve for ratio_spread
};

struct ExampleReport {
  int which = 0;
  ExponentPair exp{2.0, 2.0};
  InclusionVerdict verdict;
  ConditionReport condition_i;  // sampled on a grid that includes small n
  std::vector<BoundFit> bounds;
  std::string note;
};

/// Reruns one of the two built-in worked cases:
///   1: q_n = e^{-n} against the arithmetic mean (corollary 1 setting);
///   2: p_n = 2^n against the arithmetic mean (corollary 2 setting).
ExampleReport reproduce_example(int which, const ExponentPair& exp,
                                const CriteriaConfig& cfg = {});

// JSON serialization (stable key order).
nlohmann::ordered_json to_json(const ConditionReport& r);
nlohmann::ordered_json to_json(const InclusionVerdict& v);
nlohmann::ordered_json to_json(const BoundFit& b);
nlohmann::ordered_json to_json(const ExampleReport& r);
ConditionReport condition_report_from_json(const nlohmann::json& j);
InclusionVerdict inclusion_verdict_from_json(const nlohmann::json& j);

}  // namespace summinc
