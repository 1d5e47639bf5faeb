#include "summinc/series.hpp"

#include <istream>
#include <string>

namespace summinc {

SeriesSpec impulse_series(long n, long j) {
  if (j < 0 || j >= n) {
    throw ValidationError("impulse series: index " + std::to_string(j) +
                          " outside [0, " + std::to_string(n) + ")");
  }
  std::vector<double> t(static_cast<std::size_t>(n), 0.0);
  t[static_cast<std::size_t>(j)] = 1.0;
  return SeriesSpec(std::move(t));
}

SeriesSpec alternating_series(long n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    t[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 1.0 : -1.0;
  }
  return SeriesSpec(std::move(t));
}

SeriesSpec random_series(long n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> t(static_cast<std::size_t>(n));
  for (auto& v : t) v = uniform_pm1(gen);
  return SeriesSpec(std::move(t));
}

SeriesSpec series_from_csv(std::istream& in) {
  std::vector<double> terms;
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
      throw ConfigError("series csv: line " + std::to_string(lineno) +
                        " is not a real number");
    }
    if (line.find_first_not_of(" \t\r", pos) != std::string::npos) {
      throw ConfigError("series csv: line " + std::to_string(lineno) +
                        " has trailing characters");
    }
    terms.push_back(v);
  }
  return SeriesSpec(std::move(terms));
}

}  // namespace summinc
