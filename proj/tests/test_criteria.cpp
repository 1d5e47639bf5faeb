#include <doctest/doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "summinc/criteria.hpp"
#include "summinc/errors.hpp"

using namespace summinc;

namespace {

CriteriaConfig small_cfg() {
  CriteriaConfig cfg;
  cfg.grid = Grid{{4, 8, 16, 32}};
  return cfg;  // tail limit resolves to 128
}

std::vector<double> factorial_weights(long n_max) {
  std::vector<double> v(static_cast<std::size_t>(n_max) + 1, 1.0);
  for (long n = 1; n <= n_max; ++n) {
    v[static_cast<std::size_t>(n)] =
        v[static_cast<std::size_t>(n - 1)] * static_cast<double>(n);
  }
  return v;
}

}  // namespace

TEST_CASE("trend classifier recovers synthetic growth exponents") {
  const CriteriaConfig cfg;
  for (double gamma : {-0.5, 0.0, 0.5, 1.0}) {
    std::vector<ConditionSample> samples;
    for (long m : cfg.grid.points) {
      const double lg = gamma * std::log(static_cast<double>(m));
      samples.push_back({m, std::exp(lg), lg});
    }
    const ConditionReport rep =
        classify_condition(ConditionId::ThmI, samples, 0.0, cfg);
    CHECK(rep.fitted_exponent == doctest::Approx(gamma).epsilon(1e-9));
    if (gamma <= 0.1) {
      CHECK(rep.verdict == Verdict::Bounded);
    } else {
      CHECK(rep.verdict == Verdict::Unbounded);
    }
  }
}

TEST_CASE("growth between the two slacks is inconclusive") {
  const CriteriaConfig cfg;
  std::vector<ConditionSample> samples;
  for (long m : cfg.grid.points) {
    const double lg = 0.2 * std::log(static_cast<double>(m));
    samples.push_back({m, std::exp(lg), lg});
  }
  const ConditionReport rep =
      classify_condition(ConditionId::ThmI, samples, 0.0, cfg);
  CHECK(rep.verdict == Verdict::Inconclusive);
}

TEST_CASE("an overflowing upper-half sample forces the unbounded verdict") {
  const CriteriaConfig cfg;
  std::vector<ConditionSample> samples;
  for (long m : cfg.grid.points) samples.push_back({m, 1.0, 0.0});
  samples.back() = {samples.back().m, kPosInf, kPosInf};
  const ConditionReport rep =
      classify_condition(ConditionId::ThmI, samples, 0.0, cfg);
  CHECK(rep.verdict == Verdict::Unbounded);
  CHECK(rep.sup_estimate == kPosInf);
}

TEST_CASE("identically zero samples classify as bounded with zero sup") {
  const CriteriaConfig cfg;
  std::vector<ConditionSample> samples;
  for (long m : cfg.grid.points) samples.push_back({m, 0.0, kNegInf});
  const ConditionReport rep =
      classify_condition(ConditionId::ThmII, samples, 0.0, cfg);
  CHECK(rep.verdict == Verdict::Bounded);
  CHECK(rep.fitted_exponent == 0.0);
  CHECK(rep.sup_estimate == 0.0);
  CHECK(rep.sup_estimate_log == kNegInf);
}

TEST_CASE("slack misconfiguration is rejected") {
  CriteriaConfig cfg;
  cfg.bounded_slack = 0.5;
  cfg.unbounded_slack = 0.3;
  CHECK_THROWS_AS(
      classify_condition(ConditionId::ThmI, {{4, 1.0, 0.0}}, 0.0, cfg),
      ConfigError);
}

TEST_CASE("least-squares slope") {
  CHECK(fit_slope({{0.0, 1.0}, {1.0, 3.0}}) == doctest::Approx(2.0));
  CHECK(fit_slope({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}) == doctest::Approx(1.0));
  CHECK(fit_slope({}) == 0.0);
  CHECK(fit_slope({{1.0, 5.0}}) == 0.0);
  CHECK(fit_slope({{2.0, 1.0}, {2.0, 7.0}}) == 0.0);  // degenerate abscissae
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((Grid{{}}.validate()), ValidationError);
  CHECK_THROWS_AS((Grid{{0, 4}}.validate()), ValidationError);
  CHECK_THROWS_AS((Grid{{4, 4}}.validate()), ValidationError);
  CHECK_THROWS_AS((Grid{{8, 4}}.validate()), ValidationError);
  CHECK(Grid::log2_default().max() == 4096);
}

TEST_CASE("product condition matches a closed-form geometric factorization") {
  // Row terms 4^{-n} and unit column terms at k = s = 2 give
  //   E(m)^2 = (sum_{n>=m} 4^{-n}) * m = 4^{-m} * (4/3) * m,
  // and the appended geometric tail is exact here.
  CriteriaConfig cfg;
  cfg.grid = Grid{{16, 32, 64, 128, 256}};
  const ExponentPair exp(2.0, 2.0);
  const double ln2 = std::log(2.0);
  const ConditionReport rep = bennett_factorable_bound(
      [&](long n) { return SignedLog{-static_cast<double>(n) * ln2, 1}; },
      [](long) { return SignedLog::positive(0.0); }, exp, cfg);

  REQUIRE(rep.samples.size() == 5);
  for (const ConditionSample& s : rep.samples) {
    const double m = static_cast<double>(s.m);
    const double expect =
        0.5 * (std::log(4.0 / 3.0) - m * std::log(4.0) + std::log(m));
    CHECK(s.log_value == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(rep.verdict == Verdict::Bounded);
  CHECK(rep.tail_note.find("geometric tail appended") != std::string::npos);
}

TEST_CASE("a non-decaying row factor reports the truncation honestly") {
  CriteriaConfig cfg;
  cfg.grid = Grid{{4, 8, 16}};
  const ConditionReport rep = bennett_factorable_bound(
      [](long) { return SignedLog::positive(0.0); },
      [](long) { return SignedLog::positive(0.0); }, ExponentPair(2.0, 2.0),
      cfg);
  CHECK(rep.tail_note.find("truncated at n = 64") != std::string::npos);
  CHECK(rep.verdict == Verdict::Unbounded);  // E(m)^2 ~ (64 - m) * m grows
}

TEST_CASE("factorable bound requires both factor callbacks") {
  CHECK_THROWS_AS(bennett_factorable_bound(nullptr, nullptr,
                                           ExponentPair(2.0, 2.0), {}),
                  ValidationError);
}

TEST_CASE("theorem condition (i): frozen sample value") {
  CriteriaConfig cfg;
  cfg.grid = Grid{{2, 4, 8, 10, 16, 32}};
  const ConditionReport rep = eval_condition_i(
      WeightSequence::constant(), WeightSequence::exponential(-1.0),
      ExponentPair(2.0, 3.0), cfg);
  // n^{1/2-1/3} q_n P_n / (p_n Q_n) at n = 10, with
  // Q_10 = (1 - e^{-11}) / (1 - e^{-1}) and P_10 = 11.
  const double q10 = std::exp(-10.0);
  const double bigq = -std::expm1(-11.0) / -std::expm1(-1.0);
  const double expect = std::pow(10.0, 1.0 / 6.0) * q10 * 11.0 / bigq;
  const ConditionSample& s = rep.samples[3];
  REQUIRE(s.m == 10);
  CHECK(s.value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(rep.verdict == Verdict::Bounded);
}

TEST_CASE("equal weights make the inclusion trivial") {
  const InclusionVerdict v = evaluate_inclusion(
      WeightSequence::geometric(3.0), WeightSequence::geometric(3.0),
      ExponentPair(2.0, 2.0), small_cfg());
  CHECK(v.overall == Overall::Implies);
  CHECK(v.condition_i.verdict == Verdict::Bounded);
  for (const ConditionSample& s : v.condition_i.samples) {
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
  }
  // The pivot vanishes identically, so condition (ii) is exactly zero.
  CHECK(v.condition_ii.verdict == Verdict::Bounded);
  CHECK(v.condition_ii.sup_estimate == 0.0);
}

TEST_CASE("factorially growing target weights violate condition (i)") {
  const WeightSequence q = WeightSequence::explicit_values(factorial_weights(130));
  CriteriaConfig cfg;
  cfg.grid = Grid{{2, 4, 8, 16, 32, 64, 128}};
  const ConditionReport rep = eval_condition_i(
      WeightSequence::constant(), q, ExponentPair(2.0, 2.0), cfg);
  // q_n P_n / (p_n Q_n) ~ n here.
  CHECK(rep.verdict == Verdict::Unbounded);
  CHECK(rep.fitted_exponent == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("verdicts and samples are invariant under weight rescaling") {
  CriteriaConfig cfg;
  cfg.grid = Grid{{4, 8, 16}};  // tail limit 64
  std::vector<double> base(65);
  for (std::size_t i = 0; i < base.size(); ++i) {
    base[i] = 1.0 + static_cast<double>((i * 37) % 101) / 101.0;
  }
  std::vector<double> scaled = base;
  for (auto& v : scaled) v *= 1e5;
  std::vector<double> q_small(65, 1e-3);

  const ExponentPair exp(2.0, 3.0);
  const InclusionVerdict a = evaluate_inclusion(
      WeightSequence::explicit_values(base), WeightSequence::constant(), exp, cfg);
  const InclusionVerdict b = evaluate_inclusion(
      WeightSequence::explicit_values(scaled),
      WeightSequence::explicit_values(q_small), exp, cfg);
  CHECK(a.overall == b.overall);
  REQUIRE(a.condition_ii.samples.size() == b.condition_ii.samples.size());
  for (std::size_t i = 0; i < a.condition_i.samples.size(); ++i) {
    CHECK(a.condition_i.samples[i].value ==
          doctest::Approx(b.condition_i.samples[i].value).epsilon(1e-9));
  }
  for (std::size_t i = 0; i < a.condition_ii.samples.size(); ++i) {
    CHECK(a.condition_ii.samples[i].value ==
          doctest::Approx(b.condition_ii.samples[i].value).epsilon(1e-9));
  }
}

TEST_CASE("single-index corollary matches the general conditions exactly") {
  // At s == k the specialized evaluator must walk the same numbers.
  const CriteriaConfig cfg = small_cfg();
  const WeightSequence p = WeightSequence::geometric(2.0);
  const WeightSequence q = WeightSequence::constant();
  const ExponentPair exp(2.0, 2.0);
  const InclusionVerdict general = evaluate_inclusion(p, q, exp, cfg);
  const InclusionVerdict special = eval_corollary(3, p, q, exp, cfg);
  CHECK(special.condition_i.id == ConditionId::Cor3I);
  CHECK(special.overall == general.overall);
  REQUIRE(special.condition_i.samples.size() == general.condition_i.samples.size());
  for (std::size_t i = 0; i < general.condition_i.samples.size(); ++i) {
    CHECK(special.condition_i.samples[i].log_value ==
          general.condition_i.samples[i].log_value);
  }
  REQUIRE(special.condition_ii.samples.size() ==
          general.condition_ii.samples.size());
  for (std::size_t i = 0; i < general.condition_ii.samples.size(); ++i) {
    CHECK(special.condition_ii.samples[i].log_value ==
          general.condition_ii.samples[i].log_value);
  }
}

TEST_CASE("arithmetic-mean-source corollary agrees with the general verdict") {
  const CriteriaConfig cfg = small_cfg();
  const WeightSequence p = WeightSequence::constant();
  const WeightSequence q = WeightSequence::exponential(-1.0);
  const ExponentPair exp(2.0, 3.0);
  const InclusionVerdict general = evaluate_inclusion(p, q, exp, cfg);
  const InclusionVerdict special = eval_corollary(1, p, q, exp, cfg);
  CHECK(general.overall == Overall::Implies);
  CHECK(special.overall == Overall::Implies);
  CHECK(special.condition_i.verdict == general.condition_i.verdict);
  CHECK(special.condition_ii.verdict == general.condition_ii.verdict);
}

TEST_CASE("arithmetic-mean-target corollary agrees with the general verdict") {
  const CriteriaConfig cfg = small_cfg();
  const WeightSequence p = WeightSequence::geometric(2.0);
  const WeightSequence q = WeightSequence::constant();
  const ExponentPair exp(2.0, 2.0);
  const InclusionVerdict general = evaluate_inclusion(p, q, exp, cfg);
  const InclusionVerdict special = eval_corollary(2, p, q, exp, cfg);
  CHECK(special.condition_i.id == ConditionId::Cor2I);
  CHECK(special.condition_ii.id == ConditionId::Cor2II);
  CHECK(special.condition_ii.target_exponent == 1.0);
  CHECK(general.overall == Overall::Implies);
  CHECK(special.overall == Overall::Implies);
}

TEST_CASE("equivalence check against the arithmetic mean") {
  const CriteriaConfig cfg = small_cfg();
  SUBCASE("constant weights satisfy both ratio conditions") {
    const InclusionVerdict v = eval_corollary(
        4, WeightSequence::constant(), WeightSequence::constant(),
        ExponentPair(2.0, 2.0), cfg);
    CHECK(v.condition_i.id == ConditionId::Cor4Direct);
    CHECK(v.condition_ii.id == ConditionId::Cor4Reverse);
    CHECK(v.condition_i.verdict == Verdict::Bounded);
    CHECK(v.condition_ii.verdict == Verdict::Bounded);
    CHECK(v.overall == Overall::Implies);
  }
  SUBCASE("doubling weights fail the direct ratio condition") {
    const InclusionVerdict v = eval_corollary(
        4, WeightSequence::geometric(2.0), WeightSequence::geometric(2.0),
        ExponentPair(2.0, 2.0), cfg);
    // n p_n / P_n ~ n/2 grows; P_n / (n p_n) ~ 2/n stays bounded.
    CHECK(v.condition_i.verdict == Verdict::Unbounded);
    CHECK(v.condition_ii.verdict == Verdict::Bounded);
    CHECK(v.overall == Overall::DoesNotImply);
  }
}

TEST_CASE("corollary preconditions are enforced") {
  const CriteriaConfig cfg = small_cfg();
  const ExponentPair exp(2.0, 2.0);
  CHECK_THROWS_AS(eval_corollary(1, WeightSequence::geometric(2.0),
                                 WeightSequence::constant(), exp, cfg),
                  ValidationError);
  CHECK_THROWS_AS(eval_corollary(2, WeightSequence::constant(),
                                 WeightSequence::geometric(2.0), exp, cfg),
                  ValidationError);
  CHECK_THROWS_AS(eval_corollary(3, WeightSequence::constant(),
                                 WeightSequence::constant(),
                                 ExponentPair(2.0, 3.0), cfg),
                  ValidationError);
  CHECK_THROWS_AS(eval_corollary(4, WeightSequence::geometric(2.0),
                                 WeightSequence::constant(), exp, cfg),
                  ValidationError);
  CHECK_THROWS_AS(eval_corollary(4, WeightSequence::constant(),
                                 WeightSequence::constant(),
                                 ExponentPair(2.0, 3.0), cfg),
                  ValidationError);
  CHECK_THROWS_AS(eval_corollary(5, WeightSequence::constant(),
                                 WeightSequence::constant(), exp, cfg),
                  ValidationError);
}

TEST_CASE("tail limit must dominate the grid") {
  CriteriaConfig cfg;
  cfg.grid = Grid{{16, 4096}};
  cfg.tail_limit = 100;
  CHECK_THROWS_AS(eval_condition_ii(WeightSequence::constant(),
                                    WeightSequence::exponential(-1.0),
                                    ExponentPair(2.0, 2.0), cfg),
                  ConfigError);
}

TEST_CASE("matrix-backed factorable bound matches the weight-based one") {
  CriteriaConfig cfg;
  cfg.grid = Grid{{4, 8, 16, 32}};  // tail limit 128
  const ExponentPair exp(2.0, 3.0);
  const WeightSequence p = WeightSequence::constant();
  const WeightSequence q = WeightSequence::exponential(-1.0);
  const InclusionMatrix m = InclusionMatrix::build(p, q, exp, 128);
  const auto [lower, diag] = m.split();

  const ConditionReport from_matrix = bennett_factorable_bound(lower, exp, cfg);
  const ConditionReport from_weights = eval_condition_ii(p, q, exp, cfg);
  REQUIRE(from_matrix.samples.size() == from_weights.samples.size());
  for (std::size_t i = 0; i < from_matrix.samples.size(); ++i) {
    CHECK(from_matrix.samples[i].log_value ==
          doctest::Approx(from_weights.samples[i].log_value).epsilon(1e-10));
  }
  CHECK(from_matrix.verdict == from_weights.verdict);

  SUBCASE("undersized matrices are rejected") {
    const InclusionMatrix tiny = InclusionMatrix::build(p, q, exp, 16);
    const auto small_lower = tiny.split().first;
    CHECK_THROWS_AS(bennett_factorable_bound(small_lower, exp, cfg), ConfigError);
  }
  SUBCASE("exponents must match the matrix") {
    CHECK_THROWS_AS(
        bennett_factorable_bound(lower, ExponentPair(2.0, 2.0), cfg),
        ValidationError);
  }
}

TEST_CASE("worked case 1: steeply decaying target weights") {
  const ExampleReport rep = reproduce_example(1, ExponentPair(2.0, 3.0));
  CHECK(rep.which == 1);
  CHECK(rep.verdict.overall == Overall::Implies);
  CHECK(rep.condition_i.id == ConditionId::Cor1I);

  // Frozen sample: n^{1+1/k-1/s} q_n / Q_n at n = 10.
  const double expect = std::pow(10.0, 7.0 / 6.0) * std::exp(-10.0) *
                        -std::expm1(-1.0) / -std::expm1(-11.0);
  bool found = false;
  for (const ConditionSample& s : rep.condition_i.samples) {
    if (s.m == 10) {
      CHECK(s.value == doctest::Approx(expect).epsilon(1e-12));
      found = true;
    }
    if (s.m == 30) CHECK(s.value < 1e-3);
  }
  CHECK(found);

  REQUIRE(rep.bounds.size() == 2);
  const BoundFit& tail = rep.bounds[0];
  CHECK(tail.name == "I2");
  CHECK(tail.fit_axis == "m");
  // The true tail decays like e^{-m} (up to a polynomial), which is far
  // steeper than the claimed e^{-m/s} rate: the upper bound holds while the
  // narrow two-sided rate window does not.
  CHECK(tail.fitted == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(tail.pass_upper);
  CHECK_FALSE(tail.pass_two_sided);

  const BoundFit& pivot = rep.bounds[1];
  CHECK(pivot.name == "I3_kstar");
  CHECK(pivot.fit_axis == "log log m");
  CHECK(pivot.pass_two_sided);
  CHECK(pivot.ratio_spread < 3.0);
  CHECK(rep.note.find("geometric tail appended") != std::string::npos);
}

TEST_CASE("worked case 2: doubling source weights") {
  const ExampleReport rep = reproduce_example(2, ExponentPair(2.0, 2.0));
  CHECK(rep.verdict.overall == Overall::Implies);
  CHECK(rep.condition_i.id == ConditionId::Cor2I);

  // Frozen sample: n^{1/k-1/s-1} P_n/p_n = (2 - 2^{-n})/n at n = 16.
  bool found = false;
  for (const ConditionSample& s : rep.condition_i.samples) {
    if (s.m == 16) {
      CHECK(s.value ==
            doctest::Approx((2.0 - std::pow(2.0, -16.0)) / 16.0).epsilon(1e-13));
      found = true;
    }
  }
  CHECK(found);
  CHECK(rep.condition_i.samples.back().value < 1e-3);

  REQUIRE(rep.bounds.size() == 1);
  const BoundFit& pivot = rep.bounds[0];
  CHECK(pivot.name == "I4_kstar");
  CHECK(pivot.target == doctest::Approx(2.0));  // k* at k = 2
  CHECK(pivot.pass_two_sided);
  CHECK(pivot.ratio_spread < 3.0);

  CHECK_THROWS_AS(reproduce_example(3, ExponentPair(2.0, 2.0)), ValidationError);
}

TEST_CASE("condition reports survive a json round trip") {
  const ConditionReport rep = eval_condition_i(
      WeightSequence::constant(), WeightSequence::exponential(-1.0),
      ExponentPair(2.0, 3.0), small_cfg());
  const ConditionReport back = condition_report_from_json(to_json(rep));
  CHECK(back.id == rep.id);
  CHECK(back.fitted_exponent == rep.fitted_exponent);
  CHECK(back.target_exponent == rep.target_exponent);
  CHECK(back.verdict == rep.verdict);
  CHECK(back.sup_estimate == rep.sup_estimate);
  CHECK(back.sup_estimate_log == rep.sup_estimate_log);
  CHECK(back.tail_note == rep.tail_note);
  REQUIRE(back.samples.size() == rep.samples.size());
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    CHECK(back.samples[i].m == rep.samples[i].m);
    CHECK(back.samples[i].value == rep.samples[i].value);
    CHECK(back.samples[i].log_value == rep.samples[i].log_value);
  }
}

TEST_CASE("json encodes out-of-range numbers as null and restores them") {
  ConditionReport rep;
  rep.id = ConditionId::ThmII;
  rep.samples.push_back({4, 0.0, kNegInf});
  rep.samples.push_back({8, kPosInf, kPosInf});
  rep.verdict = Verdict::Unbounded;
  rep.sup_estimate = kPosInf;
  rep.sup_estimate_log = kPosInf;

  const nlohmann::ordered_json j = to_json(rep);
  CHECK(j.at("samples").at(0).at(1) == 0.0);
  CHECK(j.at("samples").at(0).at(2).is_null());
  CHECK(j.at("samples").at(1).at(1).is_null());
  CHECK(j.at("sup_estimate").is_null());

  const ConditionReport back = condition_report_from_json(j);
  CHECK(back.samples[0].value == 0.0);
  CHECK(back.samples[0].log_value == kNegInf);
  CHECK(back.samples[1].value == kPosInf);
  CHECK(back.samples[1].log_value == kPosInf);
  CHECK(back.sup_estimate == kPosInf);
}

TEST_CASE("inclusion verdicts survive a json round trip") {
  const InclusionVerdict v = evaluate_inclusion(
      WeightSequence::constant(), WeightSequence::exponential(-1.0),
      ExponentPair(2.0, 3.0), small_cfg());
  const InclusionVerdict back = inclusion_verdict_from_json(to_json(v));
  CHECK(back.overall == v.overall);
  CHECK(back.condition_i.verdict == v.condition_i.verdict);
  CHECK(back.condition_ii.verdict == v.condition_ii.verdict);
  CHECK(to_json(back) == to_json(v));
}

TEST_CASE("verdict strings") {
  CHECK(to_string(ConditionId::Cor4Direct) == "cor4_direct");
  CHECK(to_string(Verdict::Bounded) == "bounded");
  CHECK(to_string(Overall::DoesNotImply) == "does_not_imply");
}
