#pragma once

#include "ergolim/types.hpp"

namespace ergolim {

/**
 * A square matrix acting on coordinate vectors of fixed dimension.
 *
 * When flagged markov, entries must be real and nonnegative and every row
 * must sum to 1 within tol::markov (models a positive contraction with
 * T1 = 1 on sup-normed coordinates).
 */
class DenseOperator {
 public:
  explicit DenseOperator(Mat matrix, bool markov = false);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Mat& matrix() const { return matrix_; }
  bool markov() const { return markov_; }

  /// All imaginary parts at or below tol::real_report.
  bool is_effectively_real() const;

  static DenseOperator identity(int n);

 private:
  Mat matrix_;
  bool markov_;
};

}  // namespace ergolim
