#include "ergolim/operator_handle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ergolim/errors.hpp"

namespace ergolim {

const DenseOperator& OperatorHandle::dense() const {
  if (!std::holds_alternative<DenseOperator>(payload_)) {
    throw InvalidInput("operator is not on the dense backend");
  }
  return std::get<DenseOperator>(payload_);
}

const FiniteRankOperator& OperatorHandle::finite_rank() const {
  if (!std::holds_alternative<FiniteRankOperator>(payload_)) {
    throw InvalidInput("operator is not on the finite-rank backend");
  }
  return std::get<FiniteRankOperator>(payload_);
}

bool OperatorHandle::markov() const {
  return is_dense() ? dense().markov() : finite_rank().markov();
}

Vec apply(const OperatorHandle& op, const Vec& v) {
  if (op.is_dense()) {
    const DenseOperator& d = op.dense();
    if (v.size() != d.dim()) {
      throw DimensionMismatch("apply: vector dimension does not match operator");
    }
    return d.matrix() * v;
  }
  const FiniteRankOperator& f = op.finite_rank();
  if (v.size() != f.grid_size()) {
    throw DimensionMismatch("apply: expected grid samples of matching length");
  }
  // (Tf)(x) = sum_k f(t_k) p_k(x)
  Vec at_nodes(f.rank_count());
  for (int k = 0; k < f.rank_count(); ++k) {
    at_nodes[k] = v[f.node_indices()[static_cast<size_t>(k)]];
  }
  return f.coeff_samples().transpose() * at_nodes;
}

namespace {

FiniteRankOperator compose_finite_rank(const FiniteRankOperator& a,
                                       const FiniteRankOperator& b) {
  if (!FiniteRankOperator::same_grid(a, b)) {
    throw DimensionMismatch("compose: finite-rank operators on different grids");
  }
  // (a o b) f = sum_j f(s_j) r_j with r_j = sum_k q_j(t_k) p_k,
  // where b has nodes s_j / functions q_j and a has nodes t_k / functions p_k.
  Mat q_at_a_nodes(b.rank_count(), a.rank_count());
  for (int j = 0; j < b.rank_count(); ++j) {
    for (int k = 0; k < a.rank_count(); ++k) {
      q_at_a_nodes(j, k) = b.coeff_samples()(j, a.node_indices()[static_cast<size_t>(k)]);
    }
  }
  Mat coeffs = q_at_a_nodes * a.coeff_samples();
  return FiniteRankOperator(b.nodes(), b.grid(), std::move(coeffs),
                            a.markov() && b.markov());
}

// Merge two node sets (already snapped to the shared grid) and scatter
// sample rows accordingly.
FiniteRankOperator combine_finite_rank(const FiniteRankOperator& a, Complex ca,
                                       const FiniteRankOperator& b, Complex cb) {
  if (!FiniteRankOperator::same_grid(a, b)) {
    throw DimensionMismatch("operator combination: different grids");
  }
  std::vector<int> merged;
  merged.reserve(static_cast<size_t>(a.rank_count() + b.rank_count()));
  merged.insert(merged.end(), a.node_indices().begin(), a.node_indices().end());
  merged.insert(merged.end(), b.node_indices().begin(), b.node_indices().end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  const int n = static_cast<int>(merged.size());
  RealVec nodes(n);
  for (int r = 0; r < n; ++r) nodes[r] = a.grid()[merged[static_cast<size_t>(r)]];

  Mat coeffs = Mat::Zero(n, a.grid_size());
  auto scatter = [&](const FiniteRankOperator& src, Complex scale) {
    for (int k = 0; k < src.rank_count(); ++k) {
      const int idx = src.node_indices()[static_cast<size_t>(k)];
      const auto it = std::lower_bound(merged.begin(), merged.end(), idx);
      const int r = static_cast<int>(it - merged.begin());
      coeffs.row(r) += scale * src.coeff_samples().row(k);
    }
  };
  scatter(a, ca);
  scatter(b, cb);
  return FiniteRankOperator(std::move(nodes), a.grid(), std::move(coeffs), false);
}

}  // namespace

OperatorHandle compose(const OperatorHandle& a, const OperatorHandle& b) {
  if (a.backend() != b.backend()) {
    throw InvalidInput("compose: operators on different backends");
  }
  if (a.is_dense()) {
    const DenseOperator& da = a.dense();
    const DenseOperator& db = b.dense();
    if (da.dim() != db.dim()) {
      throw DimensionMismatch("compose: dimension mismatch");
    }
    return DenseOperator(da.matrix() * db.matrix(), da.markov() && db.markov());
  }
  return compose_finite_rank(a.finite_rank(), b.finite_rank());
}

OperatorHandle power(const OperatorHandle& op, int m) {
  if (m < 1) {
    throw InvalidInput("power requires m >= 1");
  }
  OperatorHandle acc = op;
  for (int i = 1; i < m; ++i) {
    acc = compose(acc, op);
  }
  return acc;
}

double operator_norm(const OperatorHandle& op) {
  if (op.is_dense()) {
    return op.dense().matrix().cwiseAbs().rowwise().sum().maxCoeff();
  }
  // sup over grid points x of sum_k |p_k(x)|.
  return op.finite_rank().coeff_samples().cwiseAbs().colwise().sum().maxCoeff();
}

Functional adjoint_apply(const OperatorHandle& op, const Functional& f) {
  if (op.is_dense()) {
    if (f.kind() != Functional::Kind::coordinate) {
      throw FunctionalNotRepresentable(
          "dense backend supports coordinate functionals only");
    }
    const DenseOperator& d = op.dense();
    if (f.coefficients().size() != d.dim()) {
      throw DimensionMismatch("adjoint_apply: functional dimension mismatch");
    }
    Vec row = d.matrix().transpose() * f.coefficients();
    return Functional::coordinate(std::move(row));
  }
  const FiniteRankOperator& fr = op.finite_rank();
  if (f.kind() != Functional::Kind::point_evaluation) {
    throw FunctionalNotRepresentable(
        "finite-rank backend supports point-evaluation functionals only");
  }
  // delta_t o T = sum_k p_k(t) delta_{t_k}, extended linearly over the input
  // combination sum_j w_j delta_{s_j}.
  Vec out = Vec::Zero(fr.rank_count());
  const RealVec& s = f.nodes();
  const Vec& w = f.weights();
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    const int idx = grid_index(fr.grid(), s[j]);
    if (idx < 0) {
      throw FunctionalNotRepresentable("functional node is not a grid point");
    }
    out += w[j] * fr.coeff_samples().col(idx);
  }
  return Functional::point_combination(fr.nodes(), std::move(out));
}

OperatorHandle subtract(const OperatorHandle& a, const OperatorHandle& b) {
  return add_scaled(a, Complex{1.0, 0.0}, b, Complex{-1.0, 0.0});
}

OperatorHandle add_scaled(const OperatorHandle& a, Complex ca, const OperatorHandle& b,
                          Complex cb) {
  if (a.backend() != b.backend()) {
    throw InvalidInput("operator combination: different backends");
  }
  if (a.is_dense()) {
    const DenseOperator& da = a.dense();
    const DenseOperator& db = b.dense();
    if (da.dim() != db.dim()) {
      throw DimensionMismatch("operator combination: dimension mismatch");
    }
    return DenseOperator(ca * da.matrix() + cb * db.matrix(), false);
  }
  return combine_finite_rank(a.finite_rank(), ca, b.finite_rank(), cb);
}

Mat materialize_dense(const OperatorHandle& op) {
  if (op.is_dense()) {
    return op.dense().matrix();
  }
  const FiniteRankOperator& f = op.finite_rank();
  // Grid-to-grid kernel: column j carries the coefficient function of node j
  // placed at that node's grid index; all other columns are zero.
  Mat kernel = Mat::Zero(f.grid_size(), f.grid_size());
  for (int k = 0; k < f.rank_count(); ++k) {
    kernel.col(f.node_indices()[static_cast<size_t>(k)]) =
        f.coeff_samples().row(k).transpose();
  }
  return kernel;
}

}  // namespace ergolim
