#include "summinc/weights.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

namespace summinc {

std::string to_string(WeightKind k) {
  switch (k) {
    case WeightKind::Constant: return "constant";
    case WeightKind::Power: return "power";
    case WeightKind::Geometric: return "geometric";
    case WeightKind::Exponential: return "exponential";
    case WeightKind::Explicit: return "explicit";
  }
  return "?";
}

WeightSequence::WeightSequence(WeightKind kind, double param, long offset,
                               std::vector<double> values)
    : kind_(kind), param_(param), offset_(offset), values_(std::move(values)) {}

WeightSequence WeightSequence::constant(long offset) {
  return WeightSequence(WeightKind::Constant, 0.0, offset, {});
}

WeightSequence WeightSequence::power(double exponent, long offset) {
  if (!std::isfinite(exponent)) {
    throw ValidationError("power weights: exponent must be finite");
  }
  return WeightSequence(WeightKind::Power, exponent, offset, {});
}

WeightSequence WeightSequence::geometric(double ratio, long offset) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw ValidationError("geometric weights: ratio must be positive and finite");
  }
  return WeightSequence(WeightKind::Geometric, ratio, offset, {});
}

WeightSequence WeightSequence::exponential(double rate, long offset) {
  if (!std::isfinite(rate)) {
    throw ValidationError("exponential weights: rate must be finite");
  }
  return WeightSequence(WeightKind::Exponential, rate, offset, {});
}

WeightSequence WeightSequence::explicit_values(std::vector<double> values,
                                               long offset) {
  if (values.empty()) {
    throw ValidationError("explicit weights: list must not be empty");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw ValidationError("explicit weights: entry at index " +
                            std::to_string(i) + " is not a positive finite real");
    }
  }
  return WeightSequence(WeightKind::Explicit, 0.0, offset, std::move(values));
}

long WeightSequence::max_index() const {
  if (kind_ != WeightKind::Explicit) return std::numeric_limits<long>::max();
  return static_cast<long>(values_.size()) - 1 - offset_;
}

void WeightSequence::check_index(long n) const {
  if (n < 0) {
    throw RangeError(describe() + ": negative index " + std::to_string(n));
  }
  if (kind_ == WeightKind::Explicit) {
    const long j = n + offset_;
    if (j < 0 || j >= static_cast<long>(values_.size())) {
      throw RangeError(describe() + ": index " + std::to_string(n) +
                       " is outside the stored list");
    }
  }
  if (kind_ == WeightKind::Power && n + offset_ <= 0) {
    throw ValidationError(describe() + ": p_" + std::to_string(n) +
                          " has non-positive base " + std::to_string(n + offset_) +
                          "; increase the offset");
  }
}

namespace {

// Linear-domain weight value; may round-trip to 0 or inf outside double
// range. pow keeps small integer cases (2^3, 3^2, ...) exact where
// exp(log ...) would be off by an ulp.
double linear_weight(WeightKind kind, double param,
                     const std::vector<double>& values, long offset, long n) {
  const double m = static_cast<double>(n + offset);
  switch (kind) {
    case WeightKind::Constant: return 1.0;
    case WeightKind::Power: return std::pow(m, param);
    case WeightKind::Geometric: return std::pow(param, m);
    case WeightKind::Exponential: return std::exp(param * m);
    case WeightKind::Explicit:
      return values[static_cast<std::size_t>(n + offset)];
  }
  return 0.0;
}

}  // namespace

double WeightSequence::value(long n) const {
  check_index(n);
  const double v = linear_weight(kind_, param_, values_, offset_, n);
  if (!std::isfinite(v) || v == 0.0) {
    throw OverflowError(describe() + ": p_" + std::to_string(n) +
                        " is outside double range; use log_value");
  }
  return v;
}

double WeightSequence::log_value(long n) const {
  check_index(n);
  const double m = static_cast<double>(n + offset_);
  switch (kind_) {
    case WeightKind::Constant: return 0.0;
    case WeightKind::Power: return param_ * std::log(m);
    case WeightKind::Geometric: return m * std::log(param_);
    case WeightKind::Exponential: return param_ * m;
    case WeightKind::Explicit:
      return std::log(values_[static_cast<std::size_t>(n + offset_)]);
  }
  return 0.0;
}

std::string WeightSequence::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  switch (kind_) {
    case WeightKind::Power: os << "(exponent=" << param_ << ")"; break;
    case WeightKind::Geometric: os << "(ratio=" << param_ << ")"; break;
    case WeightKind::Exponential: os << "(rate=" << param_ << ")"; break;
    case WeightKind::Explicit: os << "(" << values_.size() << " values)"; break;
    default: break;
  }
  if (offset_ != 0) os << "[offset=" << offset_ << "]";
  return os.str();
}

WeightSequence WeightSequence::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("weight spec: expected an object with a \"kind\" key");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const long offset = j.value("offset", 0L);
  if (kind == "constant") return WeightSequence::constant(offset);
  if (kind == "power") {
    if (!j.contains("exponent")) throw ConfigError("power weights: missing \"exponent\"");
    return WeightSequence::power(j.at("exponent").get<double>(), offset);
  }
  if (kind == "geometric") {
    if (!j.contains("ratio")) throw ConfigError("geometric weights: missing \"ratio\"");
    return WeightSequence::geometric(j.at("ratio").get<double>(), offset);
  }
  if (kind == "exponential") {
    if (!j.contains("rate")) throw ConfigError("exponential weights: missing \"rate\"");
    return WeightSequence::exponential(j.at("rate").get<double>(), offset);
  }
  if (kind == "explicit") {
    if (!j.contains("values")) throw ConfigError("explicit weights: missing \"values\"");
    return WeightSequence::explicit_values(
        j.at("values").get<std::vector<double>>(), offset);
  }
  throw ConfigError("weight spec: unknown kind \"" + kind + "\"");
}

nlohmann::json WeightSequence::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind_);
  switch (kind_) {
    case WeightKind::Power: j["exponent"] = param_; break;
    case WeightKind::Geometric: j["ratio"] = param_; break;
    case WeightKind::Exponential: j["rate"] = param_; break;
    case WeightKind::Explicit: j["values"] = values_; break;
    default: break;
  }
  j["offset"] = offset_;
  return j;
}

WeightSequence WeightSequence::from_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &pos);
    } catch (const std::exception&) {
      throw ConfigError("weight csv: line " + std::to_string(lineno) +
                        " is not a real number");
    }
    if (line.find_first_not_of(" \t\r", pos) != std::string::npos) {
      throw ConfigError("weight csv: line " + std::to_string(lineno) +
                        " has trailing characters");
    }
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("weight csv: no values found");
  return explicit_values(std::move(values));
}

CumulativeView::CumulativeView(const WeightSequence& w, long n_max)
    : w_(w), n_max_(n_max) {
  if (n_max < 0) throw ValidationError("cumulative view: n_max must be >= 0");
  if (n_max > w.max_index()) {
    throw RangeError("cumulative view: " + w.describe() + " only defines indices up to " +
                     std::to_string(w.max_index()));
  }
  const std::size_t count = static_cast<std::size_t>(n_max) + 1;
  logp_.resize(count);
  logP_.resize(count);
  psum_.resize(count);
  plin_.resize(count);
  ratio_.resize(count);
  logratio_.resize(count);

  KahanSum psum;
  for (long n = 0; n <= n_max; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    logp_[i] = w.log_value(n);
    plin_[i] = linear_weight(w.kind(), w.param(), w.values(), w.offset(), n);
    psum.add(plin_[i]);
    psum_[i] = psum.value();
    if (n == 0) {
      logP_[i] = logp_[i];
      ratio_[i] = 1.0;
      logratio_[i] = 0.0;
    } else {
      logP_[i] = log_add_exp(logP_[i - 1], logp_[i]);
      // r_n = 1 + (p_{n-1}/p_n) r_{n-1}, both in linear and in log domain.
      const double step = logp_[i - 1] - logp_[i];
      ratio_[i] = 1.0 + std::exp(step) * ratio_[i - 1];
      logratio_[i] = log_add_exp(0.0, step + logratio_[i - 1]);
    }
  }
}

long CumulativeView::checked(long n) const {
  if (n < 0 || n > n_max_) {
    throw RangeError("cumulative view: index " + std::to_string(n) +
                     " outside precomputed range [0, " + std::to_string(n_max_) + "]");
  }
  return n;
}

double CumulativeView::p(long n) const {
  const double v = plin_.at(checked(n));
  if (!std::isfinite(v) || v == 0.0) {
    throw OverflowError(w_.describe() + ": p_" + std::to_string(n) +
                        " is outside double range; use log_p");
  }
  return v;
}

double CumulativeView::partial_sum(long n) const {
  const double v = psum_.at(checked(n));
  if (!std::isfinite(v)) {
    throw OverflowError(w_.describe() + ": P_" + std::to_string(n) +
                        " overflows; use log_partial_sum");
  }
  return v;
}

double CumulativeView::ratio_P_over_p(long n) const {
  const double v = ratio_.at(checked(n));
  if (!std::isfinite(v)) {
    throw OverflowError(w_.describe() + ": P_" + std::to_string(n) + "/p_" +
                        std::to_string(n) + " overflows; use log_ratio_P_over_p");
  }
  return v;
}

double partial_sum(const WeightSequence& w, long n) {
  KahanSum acc;
  for (long i = 0; i <= n; ++i) acc.add(w.value(i));
  const double v = acc.value();
  if (!std::isfinite(v)) {
    throw OverflowError(w.describe() + ": P_" + std::to_string(n) + " overflows");
  }
  return v;
}

double log_partial_sum(const WeightSequence& w, long n) {
  double lp = kNegInf;
  for (long i = 0; i <= n; ++i) lp = log_add_exp(lp, w.log_value(i));
  return lp;
}

double ratio_P_over_p(const WeightSequence& w, long n) {
  double r = 1.0;
  for (long i = 1; i <= n; ++i) {
    r = 1.0 + std::exp(w.log_value(i - 1) - w.log_value(i)) * r;
  }
  if (!std::isfinite(r)) {
    throw OverflowError(w.describe() + ": P_" + std::to_string(n) + "/p_" +
                        std::to_string(n) + " overflows");
  }
  return r;
}

}  // namespace summinc
