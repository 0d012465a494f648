#include "ergolim/finite_rank_operator.hpp"

#include <cmath>

#include "ergolim/errors.hpp"
#include "ergolim/functional.hpp"

namespace ergolim {

FiniteRankOperator::FiniteRankOperator(RealVec nodes, RealVec grid, Mat coeff_samples,
                                       bool markov)
    : nodes_(std::move(nodes)),
      grid_(std::move(grid)),
      coeff_samples_(std::move(coeff_samples)),
      markov_(markov) {
  const Eigen::Index n = nodes_.size();
  const Eigen::Index g = grid_.size();
  if (n < 1) throw InvalidInput("finite-rank operator needs at least one node");
  if (g < 2) throw InvalidInput("grid needs at least two points");
  if (coeff_samples_.rows() != n || coeff_samples_.cols() != g) {
    throw DimensionMismatch("coefficient samples must be nodes x grid");
  }
  if (std::abs(grid_[0]) > 1e-12 || std::abs(grid_[g - 1] - 1.0) > 1e-12) {
    throw InvalidInput("grid must cover [0,1]");
  }
  for (Eigen::Index i = 0; i + 1 < g; ++i) {
    if (!(grid_[i] < grid_[i + 1])) {
      throw InvalidInput("grid must be strictly increasing");
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k + 1 < n && !(nodes_[k] < nodes_[k + 1])) {
      throw InvalidInput("nodes must be strictly increasing");
    }
    if (nodes_[k] < -tol::node_snap || nodes_[k] > 1.0 + tol::node_snap) {
      throw InvalidInput("nodes must lie in [0,1]");
    }
  }

  node_indices_.resize(static_cast<size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const int idx = grid_index(grid_, nodes_[k]);
    if (idx < 0) {
      throw InvalidInput("every node must coincide with a grid point");
    }
    node_indices_[static_cast<size_t>(k)] = idx;
    nodes_[k] = grid_[idx];  // snap
  }

  // node_matrix(i,j) = p_j(t_i), read directly from the samples.
  node_matrix_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      node_matrix_(i, j) = coeff_samples_(j, node_indices_[static_cast<size_t>(i)]);
    }
  }

  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index x = 0; x < g; ++x) {
      const Complex z = coeff_samples_(k, x);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidInput("coefficient samples have non-finite entries");
      }
    }
  }

  if (markov_) {
    for (Eigen::Index x = 0; x < g; ++x) {
      double column_sum = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const Complex z = coeff_samples_(k, x);
        if (std::abs(z.imag()) > tol::real_report) {
          throw InvalidInput("markov coefficient functions must be real");
        }
        if (z.real() < -tol::markov) {
          throw InvalidInput("markov coefficient functions must be nonnegative");
        }
        column_sum += z.real();
      }
      if (std::abs(column_sum - 1.0) > tol::markov) {
        throw InvalidInput("markov coefficient functions must form a partition of unity");
      }
    }
  }
}

bool FiniteRankOperator::is_effectively_real() const {
  return coeff_samples_.imag().cwiseAbs().maxCoeff() <= tol::real_report;
}

bool FiniteRankOperator::same_grid(const FiniteRankOperator& a, const FiniteRankOperator& b) {
  return a.grid_.size() == b.grid_.size() &&
         (a.grid_ - b.grid_).cwiseAbs().maxCoeff() <= 1e-12;
}

}  // namespace ergolim
