#pragma once

#include <vector>

#include "ergolim/types.hpp"

namespace ergolim {

/**
 * A finite-rank operator Tf = sum_k f(t_k) p_k on C[0,1], represented by
 * strictly increasing nodes t_k and coefficient functions p_k sampled on a
 * shared strictly increasing grid covering [0,1].
 *
 * Nodes must lie on the grid (they are snapped onto the nearest grid point,
 * which must be within tol::node_snap). node_matrix()(i,j) = p_j(t_i) is read
 * directly from the samples, so powers and compositions evolve through node
 * matrix products rather than grid-kernel products.
 *
 * When flagged markov the samples must be (numerically) nonnegative and the
 * functions must form a partition of unity at every grid point.
 */
class FiniteRankOperator {
 public:
  FiniteRankOperator(RealVec nodes, RealVec grid, Mat coeff_samples, bool markov = false);

  /// Number of coefficient functions n.
  int rank_count() const { return static_cast<int>(coeff_samples_.rows()); }
  /// Number of grid points.
  int grid_size() const { return static_cast<int>(grid_.size()); }

  const RealVec& nodes() const { return nodes_; }
  const RealVec& grid() const { return grid_; }
  /// n x G matrix; row k holds p_k sampled on the grid.
  const Mat& coeff_samples() const { return coeff_samples_; }
  /// n x n matrix with entry (i,j) = p_j(t_i).
  const Mat& node_matrix() const { return node_matrix_; }
  const std::vector<int>& node_indices() const { return node_indices_; }

  bool markov() const { return markov_; }

  bool is_effectively_real() const;

  /// Grids agree in size and pointwise within 1e-12.
  static bool same_grid(const FiniteRankOperator& a, const FiniteRankOperator& b);

 private:
  RealVec nodes_;
  RealVec grid_;
  Mat coeff_samples_;
  Mat node_matrix_;
  std::vector<int> node_indices_;
  bool markov_;
};

}  // namespace ergolim
