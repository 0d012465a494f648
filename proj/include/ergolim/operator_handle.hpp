#pragma once

#include <variant>

#include "ergolim/dense_operator.hpp"
#include "ergolim/finite_rank_operator.hpp"
#include "ergolim/functional.hpp"
#include "ergolim/types.hpp"

namespace ergolim {

/// Tagged union over the two operator backends. Immutable once constructed.
class OperatorHandle {
 public:
  enum class Backend { dense, finite_rank };

  OperatorHandle(DenseOperator op) : payload_(std::move(op)) {}
  OperatorHandle(FiniteRankOperator op) : payload_(std::move(op)) {}

  Backend backend() const {
    return std::holds_alternative<DenseOperator>(payload_) ? Backend::dense
                                                           : Backend::finite_rank;
  }
  bool is_dense() const { return backend() == Backend::dense; }
  bool is_finite_rank() const { return backend() == Backend::finite_rank; }

  const DenseOperator& dense() const;
  const FiniteRankOperator& finite_rank() const;

  bool markov() const;

 private:
  std::variant<DenseOperator, FiniteRankOperator> payload_;
};

/// T v. Dense: matrix-vector product; finite-rank: v holds grid samples of f
/// and the result holds grid samples of sum_k f(t_k) p_k.
Vec apply(const OperatorHandle& op, const Vec& v);

/// a after b: (a o b) f = a(b f). Backends and dimensions/grids must match.
OperatorHandle compose(const OperatorHandle& a, const OperatorHandle& b);

/// T^m by repeated composition; m >= 1 (the identity is backend-dependent,
/// callers construct it explicitly when needed).
OperatorHandle power(const OperatorHandle& op, int m);

/// Induced sup-operator norm: max absolute row sum for matrices; for
/// finite-rank operators the max over grid points of sum_k |p_k(x)|, which is
/// the exact sup norm restricted to the grid when nodes are distinct.
double operator_norm(const OperatorHandle& op);

/// f o T. Dense: row-vector product c^T T for coordinate functionals;
/// finite-rank: delta_t o T = sum_k p_k(t) delta_{t_k} extended linearly.
Functional adjoint_apply(const OperatorHandle& op, const Functional& f);

/// a - b on a common backend (node union for finite-rank operators).
OperatorHandle subtract(const OperatorHandle& a, const OperatorHandle& b);

/// ca*a + cb*b on a common backend.
OperatorHandle add_scaled(const OperatorHandle& a, Complex ca,
                          const OperatorHandle& b, Complex cb);

/// Dense materialization: matrix for the dense backend, grid-to-grid kernel
/// (G x G) for the finite-rank backend. Diagnostic use.
Mat materialize_dense(const OperatorHandle& op);

}  // namespace ergolim
