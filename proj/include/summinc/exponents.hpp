#pragma once

// Exponent pair (k, s) with 1 < k <= s < infinity and the conjugate indices
// k* = k/(k-1), s* = s/(s-1).

#include <cmath>
#include <string>

#include "summinc/errors.hpp"

namespace summinc {

class ExponentPair {
 public:
  ExponentPair(double k, double s) : k_(k), s_(s) {
    if (!(k > 1.0) || !(s >= k) || !std::isfinite(s)) {
      throw ValidationError(
          "exponents: the inclusion framework requires 1 < k <= s < infinity; got k=" +
          std::to_string(k) + ", s=" + std::to_string(s));
    }
  }

  double k() const { return k_; }
  double s() const { return s_; }
  double kstar() const { return k_ / (k_ - 1.0); }
  double sstar() const { return s_ / (s_ - 1.0); }

  bool operator==(const ExponentPair&) const = default;

 private:
  double k_;
  double s_;
};

}  // namespace summinc
