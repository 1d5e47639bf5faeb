#pragma once

// Lower-triangular section of the operator that maps the scaled difference
// sequence of the source weighted-mean method onto that of the target method.
// With X*_n = n^{1-1/k} X_n and Y*_n = n^{1-1/s} Y_n the identity
// Y* = A X* holds, where (1-based indices, v < n):
//   A[n][v] = b_n * c_v,    b_n = n^{1-1/s} q_n / (Q_n Q_{n-1}),
//                           c_v = (Q_v - q_v P_v / p_v) / v^{1-1/k},
//   A[n][n] = d_n = n^{1/k-1/s} q_n P_n / (p_n Q_n),
//   A[n][v] = 0 for v > n.
// All factors are kept in sign-plus-log-magnitude form; applying a section
// costs O(N) through prefix sums over the factorable part.

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "summinc/exponents.hpp"
#include "summinc/numeric.hpp"
#include "summinc/weights.hpp"

namespace summinc {

/// p_v Q_v - q_v P_v, the pivot whose sign and magnitude set the off-diagonal
/// column factor. Evaluated with FMA compensation while both products are
/// representable and as a log-domain difference beyond that, so near
/// cancellation does not destroy the value.
SignedLog weighted_pivot(const CumulativeView& cp, const CumulativeView& cq, long v);

class InclusionMatrix {
 public:
  static InclusionMatrix build(const WeightSequence& p, const WeightSequence& q,
                               const ExponentPair& exp, long n);

  long size() const { return n_; }
  const ExponentPair& exponents() const { return exp_; }

  // 1-based factor accessors.
  SignedLog row_factor(long n) const { return b_.at(idx(n)); }    // b_n
  SignedLog col_factor(long v) const { return c_.at(idx(v)); }    // c_v
  SignedLog diag_factor(long n) const { return d_.at(idx(n)); }   // d_n

  /// Entry in sign+log form; zero above the diagonal.
  SignedLog entry_log(long row, long col) const;
  /// Linear entry; loud when not representable.
  double entry(long row, long col) const;

  /// y = A x in O(N). x[i] holds the coordinate for index i+1.
  std::vector<double> apply(std::span<const double> x) const;
  /// y = A^T x in O(N) via suffix sums.
  std::vector<double> apply_transpose(std::span<const double> x) const;

  /// Strictly-lower factorable part B and diagonal part C with A = B + C.
  std::pair<InclusionMatrix, InclusionMatrix> split() const;

  /// Dense dump (row, col, value) for offline inspection; capped at N <= 100.
  void dump_dense_csv(std::ostream& os) const;

 private:
  InclusionMatrix(long n, ExponentPair exp) : n_(n), exp_(exp) {}
  std::size_t idx(long i) const;

  long n_;
  ExponentPair exp_;
  std::vector<SignedLog> b_;
  std::vector<SignedLog> c_;
  std::vector<SignedLog> d_;
};

}  // namespace summinc
