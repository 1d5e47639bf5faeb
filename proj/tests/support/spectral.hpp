#pragma once

// Test-only spectral reference: the largest singular value of a small dense
// matrix, computed by Eigen. Used to cross-check the power-iteration
// estimator in the k = s = 2 case, where the section norm is exactly the
// spectral norm.

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "summinc/series.hpp"

namespace testsupport {

inline double spectral_norm(const std::vector<double>& row_major, long n) {
  Eigen::MatrixXd a(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      a(i, j) = row_major[static_cast<std::size_t>(i * n + j)];
    }
  }
  return a.jacobiSvd().singularValues()(0);
}

inline std::vector<double> random_entries(long n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (double& v : a) v = summinc::uniform_pm1(gen);
  return a;
}

}  // namespace testsupport
