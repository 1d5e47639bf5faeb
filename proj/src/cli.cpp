#include "summinc/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI/CLI.hpp>
#include <nlohmann/json.hpp>

#include "summinc/criteria.hpp"
#include "summinc/errors.hpp"
#include "summinc/norm_estimation.hpp"
#include "summinc/series.hpp"
#include "summinc/transform.hpp"

namespace summinc {
namespace {

using nlohmann::ordered_json;

std::filesystem::path resolve_output_path(const std::string& raw) {
  std::filesystem::path p(raw);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("SUMMINC_OUT_DIR")) {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void write_text_file(const std::string& raw_path, const std::string& content) {
  const std::filesystem::path path = resolve_output_path(raw_path);
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("failed while writing: " + path.string());
}

void emit_json(const ordered_json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_sample_csv(const std::vector<ConditionSample>& samples,
                      const std::string& raw_path) {
  std::string text = "m,value\n";
  for (const ConditionSample& s : samples) {
    text += std::to_string(s.m);
    text += ',';
    text += format_double(s.value);
    text += '\n';
  }
  write_text_file(raw_path, text);
}

WeightSequence weights_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weight file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("weight file " + path + " is not valid JSON: " +
                          e.what());
  }
  return WeightSequence::from_json(j);
}

WeightSequence weights_from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weight file: " + path);
  return WeightSequence::from_csv(in);
}

double parse_number(const std::string& token, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string(what) + ": cannot parse number '" +
                          token + "'");
  }
}

long parse_integer(const std::string& token, const char* what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string(what) + ": cannot parse integer '" +
                          token + "'");
  }
}

}  // namespace

WeightSequence parse_weight_spec(const std::string& spec) {
  if (spec.empty()) throw ValidationError("weight specification is empty");
  if (spec.front() == '{') {
    try {
      return WeightSequence::from_json(nlohmann::json::parse(spec));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("inline weight JSON: ") + e.what());
    }
  }
  if (spec.ends_with(".json")) return weights_from_json_file(spec);
  if (spec.ends_with(".csv")) return weights_from_csv_file(spec);

  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t colon = spec.find(':', begin);
    if (colon == std::string::npos) {
      parts.push_back(spec.substr(begin));
      break;
    }
    parts.push_back(spec.substr(begin, colon - begin));
    begin = colon + 1;
  }

  const std::string& family = parts[0];
  const auto arity = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) {
      throw ValidationError("weight family '" + family +
                            "' takes between " + std::to_string(lo - 1) +
                            " and " + std::to_string(hi - 1) + " arguments");
    }
  };

  if (family == "constant") {
    arity(1, 2);
    const long offset =
        parts.size() == 2 ? parse_integer(parts[1], "constant offset") : 0;
    return WeightSequence::constant(offset);
  }
  if (family == "power") {
    arity(2, 3);
    const double exponent = parse_number(parts[1], "power exponent");
    const long offset =
        parts.size() == 3 ? parse_integer(parts[2], "power offset") : 1;
    return WeightSequence::power(exponent, offset);
  }
  if (family == "geometric") {
    arity(2, 3);
    const double ratio = parse_number(parts[1], "geometric ratio");
    const long offset =
        parts.size() == 3 ? parse_integer(parts[2], "geometric offset") : 0;
    return WeightSequence::geometric(ratio, offset);
  }
  if (family == "exponential") {
    arity(2, 3);
    const double rate = parse_number(parts[1], "exponential rate");
    const long offset =
        parts.size() == 3 ? parse_integer(parts[2], "exponential offset") : 0;
    return WeightSequence::exponential(rate, offset);
  }
  throw ValidationError(
      "unknown weight specification '" + spec +
      "'; expected constant, power, geometric, exponential, inline JSON, "
      "*.json, or *.csv");
}

namespace {

struct CriteriaOptions {
  std::vector<long> grid_points;
  long tail_limit = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--grid", grid_points,
                    "comma-separated sample cut points "
                    "(default 16,32,...,4096)")
        ->delimiter(',');
    cmd->add_option("--tail-limit", tail_limit,
                    "row-sum truncation index (default: 4x largest grid "
                    "point)");
  }

  CriteriaConfig config() const {
    CriteriaConfig cfg;
    if (!grid_points.empty()) cfg.grid = Grid{grid_points};
    cfg.tail_limit = tail_limit;
    cfg.grid.validate();
    return cfg;
  }
};

ordered_json weights_envelope(const WeightSequence& w) { return w.to_json(); }

int run_check(const std::string& p_spec, const std::string& q_spec, double k,
              double s, const CriteriaOptions& opts, const std::string& out,
              const std::string& csv) {
  const WeightSequence p = parse_weight_spec(p_spec);
  const WeightSequence q = parse_weight_spec(q_spec);
  const ExponentPair exp(k, s);
  const CriteriaConfig cfg = opts.config();
  const InclusionVerdict verdict = evaluate_inclusion(p, q, exp, cfg);

  ordered_json j;
  j["command"] = "check";
  j["p"] = weights_envelope(p);
  j["q"] = weights_envelope(q);
  j["k"] = k;
  j["s"] = s;
  j["grid"] = cfg.grid.points;
  j["tail_limit"] = cfg.resolved_tail_limit();
  j["result"] = to_json(verdict);
  emit_json(j, out);
  if (!csv.empty()) write_sample_csv(verdict.condition_ii.samples, csv);
  return 0;
}

int run_corollary(int which, const std::string& p_spec,
                  const std::string& q_spec, double k, double s,
                  const CriteriaOptions& opts, const std::string& out,
                  const std::string& csv) {
  const WeightSequence p = parse_weight_spec(p_spec);
  const WeightSequence q = parse_weight_spec(q_spec);
  const ExponentPair exp(k, s);
  const CriteriaConfig cfg = opts.config();
  const InclusionVerdict verdict = eval_corollary(which, p, q, exp, cfg);

  ordered_json j;
  j["command"] = "corollary";
  j["which"] = which;
  j["p"] = weights_envelope(p);
  j["q"] = weights_envelope(q);
  j["k"] = k;
  j["s"] = s;
  j["grid"] = cfg.grid.points;
  j["tail_limit"] = cfg.resolved_tail_limit();
  j["result"] = to_json(verdict);
  emit_json(j, out);
  if (!csv.empty()) write_sample_csv(verdict.condition_ii.samples, csv);
  return 0;
}

int run_reproduce(int example, double k, double s, const CriteriaOptions& opts,
                  const std::string& out) {
  const ExponentPair exp(k, s);
  const CriteriaConfig cfg = opts.config();
  const ExampleReport report = reproduce_example(example, exp, cfg);

  ordered_json j;
  j["command"] = "reproduce";
  j["report"] = to_json(report);
  emit_json(j, out);
  return 0;
}

int run_transform(const std::string& p_spec, const std::string& series_path,
                  const std::optional<double>& k, const std::string& out,
                  const std::string& csv) {
  const WeightSequence p = parse_weight_spec(p_spec);
  std::ifstream in(series_path);
  if (!in) throw IoError("cannot open series file: " + series_path);
  const SeriesSpec series = series_from_csv(in);

  std::optional<ExponentPair> exp;
  if (k) exp.emplace(*k, *k);
  const TransformResult r = evaluate_transform(p, series, exp);

  ordered_json j;
  j["command"] = "transform";
  j["p"] = weights_envelope(p);
  j["series_length"] = series.size();
  j["T"] = r.T;
  j["X"] = r.X;
  if (k) {
    j["k"] = *k;
    j["functional_ratio_weighted"] = r.functional_ratio_weighted.back();
    j["functional_index_weighted"] = r.functional_index_weighted.back();
  }
  emit_json(j, out);

  if (!csv.empty()) {
    std::string text = "n,T,X\n";
    for (std::size_t n = 0; n < r.T.size(); ++n) {
      text += std::to_string(n);
      text += ',';
      text += format_double(r.T[n]);
      text += ',';
      text += format_double(r.X[n]);
      text += '\n';
    }
    write_text_file(csv, text);
  }
  return 0;
}

int run_norm_profile(const std::string& p_spec, const std::string& q_spec,
                     double k, double s, std::vector<long> sections,
                     int restarts, std::uint64_t seed, const std::string& out,
                     const std::string& csv) {
  const WeightSequence p = parse_weight_spec(p_spec);
  const WeightSequence q = parse_weight_spec(q_spec);
  const ExponentPair exp(k, s);
  if (sections.empty()) sections = {64, 128, 256, 512, 1024};
  const std::vector<ProfilePoint> profile =
      norm_growth_profile(p, q, exp, sections, restarts, seed);

  ordered_json j;
  j["command"] = "norm-profile";
  j["p"] = weights_envelope(p);
  j["q"] = weights_envelope(q);
  j["k"] = k;
  j["s"] = s;
  j["sections"] = sections;
  j["restarts"] = restarts;
  j["seed"] = seed;
  ordered_json rows = ordered_json::array();
  for (const ProfilePoint& pt : profile) {
    ordered_json row;
    row["section"] = pt.section;
    row["estimate"] = pt.estimate;
    row["growth_ratio"] = pt.growth_ratio;
    row["iterations"] = pt.iterations;
    row["converged"] = pt.converged;
    rows.push_back(std::move(row));
  }
  j["profile"] = std::move(rows);
  emit_json(j, out);

  if (!csv.empty()) {
    std::string text = "N,norm\n";
    for (const ProfilePoint& pt : profile) {
      text += std::to_string(pt.section);
      text += ',';
      text += format_double(pt.estimate);
      text += '\n';
    }
    write_text_file(csv, text);
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "summinc: numerically decide whether absolute weighted-mean "
      "summability with one weight sequence implies it for another"};
  app.require_subcommand(1);

  std::string p_spec, q_spec, out_path, csv_path, series_path;
  double k = 0.0, s = 0.0;
  CriteriaOptions crit;
  int which = 0, example = 0, restarts = 8;
  std::uint64_t seed = 123456789;
  std::vector<long> sections;

  CLI::App* check = app.add_subcommand(
      "check", "Evaluate both inclusion conditions and combine the verdict");
  check->add_option("--p", p_spec, "source weights")->required();
  check->add_option("--q", q_spec, "target weights")->required();
  check->add_option("--k", k, "source exponent (k > 1)")->required();
  check->add_option("--s", s, "target exponent (s >= k)")->required();
  crit.attach(check);
  check->add_option("--out", out_path, "JSON report path (default: stdout)");
  check->add_option("--csv", csv_path, "condition-(ii) samples as m,value");

  CLI::App* corollary = app.add_subcommand(
      "corollary", "Evaluate one of the four specialized condition sets");
  corollary->add_option("--which", which, "corollary selector (1-4)")
      ->required();
  corollary->add_option("--p", p_spec, "source weights")->required();
  corollary->add_option("--q", q_spec, "target weights")->required();
  corollary->add_option("--k", k, "source exponent (k > 1)")->required();
  corollary->add_option("--s", s, "target exponent (s >= k)")->required();
  crit.attach(corollary);
  corollary->add_option("--out", out_path, "JSON report path");
  corollary->add_option("--csv", csv_path, "second-condition samples CSV");

  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "Rerun a built-in worked case with fitted bounds");
  reproduce->add_option("--example", example, "worked case selector (1 or 2)")
      ->required();
  reproduce->add_option("--k", k, "source exponent (k > 1)")->required();
  reproduce->add_option("--s", s, "target exponent (s >= k)")->required();
  crit.attach(reproduce);
  reproduce->add_option("--out", out_path, "JSON report path");

  CLI::App* transform = app.add_subcommand(
      "transform", "Weighted-mean transform and difference sequence of a "
                   "series read from CSV");
  transform->add_option("--p", p_spec, "weights")->required();
  transform->add_option("--series", series_path, "series terms, one per line")
      ->required();
  std::optional<double> transform_k;
  transform->add_option("--k", transform_k,
                        "also accumulate the summability functionals at this "
                        "exponent");
  transform->add_option("--out", out_path, "JSON report path");
  transform->add_option("--csv", csv_path, "n,T,X table");

  CLI::App* profile = app.add_subcommand(
      "norm-profile",
      "Estimate finite-section operator norms at increasing sizes");
  profile->add_option("--p", p_spec, "source weights")->required();
  profile->add_option("--q", q_spec, "target weights")->required();
  profile->add_option("--k", k, "source exponent (k > 1)")->required();
  profile->add_option("--s", s, "target exponent (s >= k)")->required();
  profile->add_option("--sections", sections,
                      "section sizes (default 64,128,256,512,1024)")
      ->delimiter(',');
  profile->add_option("--restarts", restarts, "random restarts per section");
  profile->add_option("--seed", seed, "restart seed");
  profile->add_option("--out", out_path, "JSON report path");
  profile->add_option("--csv", csv_path, "N,norm table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed())
      return run_check(p_spec, q_spec, k, s, crit, out_path, csv_path);
    if (corollary->parsed())
      return run_corollary(which, p_spec, q_spec, k, s, crit, out_path,
                           csv_path);
    if (reproduce->parsed())
      return run_reproduce(example, k, s, crit, out_path);
    if (transform->parsed())
      return run_transform(p_spec, series_path, transform_k, out_path,
                           csv_path);
    if (profile->parsed())
      return run_norm_profile(p_spec, q_spec, k, s, sections, restarts, seed,
                              out_path, csv_path);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const RangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace summinc
