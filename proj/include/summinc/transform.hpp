#pragma once

// Weighted-mean transform of a series and the two absolute-summability
// functionals built from its consecutive differences.
//
// For partial sums s_n = a_0 + ... + a_n the transform is
//   T_n = (1/P_n) * sum_{v=0}^{n} p_v s_v,
// and X_n = T_n - T_{n-1} for n >= 1 admits the closed form
//   X_n = (p_n / (P_n P_{n-1})) * sum_{v=1}^{n} P_{v-1} a_v.
// Both are evaluated through scale-free recurrences, so weight families with
// astronomically large or small P_n stay in range.

#include <optional>
#include <span>
#include <vector>

#include "summinc/exponents.hpp"
#include "summinc/series.hpp"
#include "summinc/weights.hpp"

namespace summinc {

/// Which weight multiplies |X_n|^k in the summability functional.
enum class FunctionalForm {
  RatioWeighted,  // (P_n/p_n)^{k-1} |X_n|^k
  IndexWeighted,  // n^{k-1} |X_n|^k
};

struct TransformResult {
  std::vector<double> T;  // T_0 .. T_{N-1}
  std::vector<double> X;  // X[0] = 0 placeholder, X[n] = T_n - T_{n-1}
  // Cumulative functional values; entry n covers the prefix 1..n, entry 0 is 0.
  std::vector<double> functional_ratio_weighted;
  std::vector<double> functional_index_weighted;
};

/// Full evaluation. Functionals are filled only when exponents are supplied.
TransformResult evaluate_transform(const WeightSequence& w, const SeriesSpec& series,
                                   const std::optional<ExponentPair>& exp = {});

/// T only.
TransformResult weighted_mean_transform(const WeightSequence& w,
                                        const SeriesSpec& series);

/// X via the closed form above (plus T for reference). The unit tests pin
/// this path against direct differencing of weighted_mean_transform output.
TransformResult transform_differences(const WeightSequence& w,
                                      const SeriesSpec& series);

/// Total functional value over the whole prefix.
double summability_functional(const WeightSequence& w, const SeriesSpec& series,
                              const ExponentPair& exp, FunctionalForm form);

/// Recovers a_1, a_2, ... from X_1, X_2, ... via
///   a_n = P_n X_n / p_n - P_{n-2} X_{n-1} / p_{n-1}   (n >= 2),
///   a_1 = P_1 X_1 / p_1.
/// x_from_1[i] holds X_{i+1}; the result r[i] holds a_{i+1}. a_0 is not
/// recoverable because the differences are blind to it.
std::vector<double> invert_differences(const WeightSequence& w,
                                       std::span<const double> x_from_1);

}  // namespace summinc
