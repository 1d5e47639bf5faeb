#include "summinc/transform.hpp"

#include <cmath>

namespace summinc {

namespace {

// Shared core. The T recurrence is the exact update
//   T_n = T_{n-1} + (p_n/P_n)(s_n - T_{n-1}),
// and the X closed form is carried as R_n = (sum_{v<=n} P_{v-1} a_v)/P_{n-1}
// with R_n = (P_{n-2}/P_{n-1}) R_{n-1} + a_n, so only ratios of cumulative
// sums appear.
TransformResult evaluate(const WeightSequence& w, const SeriesSpec& series,
                         const std::optional<ExponentPair>& exp, bool want_T,
                         bool want_X) {
  const long n_count = series.size();
  CumulativeView cum(w, n_count - 1);

  TransformResult out;
  if (want_T) out.T.resize(static_cast<std::size_t>(n_count));
  if (want_X) out.X.assign(static_cast<std::size_t>(n_count), 0.0);

  KahanSum partial;  // s_n
  double t_prev = 0.0;
  double r_prev = 0.0;
  const bool functionals = exp.has_value() && want_X;
  KahanSum f_ratio;
  KahanSum f_index;
  if (functionals) {
    out.functional_ratio_weighted.assign(static_cast<std::size_t>(n_count), 0.0);
    out.functional_index_weighted.assign(static_cast<std::size_t>(n_count), 0.0);
  }

  for (long n = 0; n < n_count; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    partial.add(series.terms[i]);
    const double s_n = partial.value();
    if (n == 0) {
      t_prev = s_n;  // T_0 = s_0
      if (want_T) out.T[i] = t_prev;
      continue;
    }
    const double p_over_P = std::exp(cum.log_p(n) - cum.log_partial_sum(n));
    if (want_T) {
      t_prev = t_prev + p_over_P * (s_n - t_prev);
      out.T[i] = t_prev;
    }
    if (want_X) {
      const double shrink =
          (n == 1) ? 0.0
                   : std::exp(cum.log_partial_sum(n - 2) - cum.log_partial_sum(n - 1));
      const double r_n = shrink * r_prev + series.terms[i];
      r_prev = r_n;
      const double x_n = p_over_P * r_n;
      out.X[i] = x_n;
      if (functionals) {
        const double k = exp->k();
        const double ax = std::fabs(x_n);
        const double xk = std::pow(ax, k);
        f_ratio.add(std::exp((k - 1.0) * cum.log_ratio_P_over_p(n)) * xk);
        f_index.add(std::pow(static_cast<double>(n), k - 1.0) * xk);
        out.functional_ratio_weighted[i] = f_ratio.value();
        out.functional_index_weighted[i] = f_index.value();
      }
    }
  }
  return out;
}

}  // namespace

TransformResult evaluate_transform(const WeightSequence& w, const SeriesSpec& series,
                                   const std::optional<ExponentPair>& exp) {
  return evaluate(w, series, exp, true, true);
}

TransformResult weighted_mean_transform(const WeightSequence& w,
                                        const SeriesSpec& series) {
  return evaluate(w, series, {}, true, false);
}

TransformResult transform_differences(const WeightSequence& w,
                                      const SeriesSpec& series) {
  return evaluate(w, series, {}, true, true);
}

double summability_functional(const WeightSequence& w, const SeriesSpec& series,
                              const ExponentPair& exp, FunctionalForm form) {
  const TransformResult r = evaluate(w, series, exp, false, true);
  const auto& f = form == FunctionalForm::RatioWeighted
                      ? r.functional_ratio_weighted
                      : r.functional_index_weighted;
  return f.back();
}

std::vector<double> invert_differences(const WeightSequence& w,
                                       std::span<const double> x_from_1) {
  if (x_from_1.size() < 2) {
    throw ValidationError("invert differences: need at least 2 entries");
  }
  const long count = static_cast<long>(x_from_1.size());
  CumulativeView cum(w, count);  // indices up to n = count

  std::vector<double> a(static_cast<std::size_t>(count));
  for (long n = 1; n <= count; ++n) {
    const double x_n = x_from_1[static_cast<std::size_t>(n - 1)];
    double v = cum.ratio_P_over_p(n) * x_n;
    if (n >= 2) {
      const double x_prev = x_from_1[static_cast<std::size_t>(n - 2)];
      // P_{n-2}/p_{n-1} stays scale-free as exp(log P_{n-2} - log p_{n-1}).
      const double lead = std::exp(cum.log_partial_sum(n - 2) - cum.log_p(n - 1));
      if (!std::isfinite(lead)) {
        throw OverflowError("invert differences: P_" + std::to_string(n - 2) +
                            "/p_" + std::to_string(n - 1) + " overflows");
      }
      v -= lead * x_prev;
    }
    a[static_cast<std::size_t>(n - 1)] = v;
  }
  return a;
}

}  // namespace summinc
