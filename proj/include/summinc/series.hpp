#pragma once

// Input series a_0, a_1, ... plus deterministic generators used by tests and
// the command line. Random draws go through an explicit bit mapping on top of
// mt19937_64 so results are identical across platforms and standard libraries.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "summinc/errors.hpp"

namespace summinc {

struct SeriesSpec {
  std::vector<double> terms;  // a_0 .. a_{N-1}

  explicit SeriesSpec(std::vector<double> t) : terms(std::move(t)) {
    if (terms.size() < 2) {
      throw ValidationError("series: need at least 2 terms");
    }
  }
  long size() const { return static_cast<long>(terms.size()); }
};

/// Uniform draw in [0, 1) built from the top 53 bits of the generator.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform draw in [-1, 1).
inline double uniform_pm1(std::mt19937_64& gen) {
  return 2.0 * uniform01(gen) - 1.0;
}

/// a_j = 1, all other terms 0.
SeriesSpec impulse_series(long n, long j);

/// a_i = (-1)^i.
SeriesSpec alternating_series(long n);

/// Independent uniform terms in [-1, 1), reproducible from the seed.
SeriesSpec random_series(long n, std::uint64_t seed);

/// One real per line; blank lines ignored.
SeriesSpec series_from_csv(std::istream& in);

}  // namespace summinc
