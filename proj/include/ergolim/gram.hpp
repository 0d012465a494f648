#pragma once

#include <optional>
#include <vector>

#include "ergolim/functional.hpp"
#include "ergolim/operator_handle.hpp"
#include "ergolim/types.hpp"

namespace ergolim {

/**
 * Bases of ker(T - lambda I)^p and ker(T* - lambda I)^p for one eigenvalue.
 *
 * Basis vectors are sup-normalized; dual functionals carry dual norm 1.
 * For the finite-rank backend the basis vectors are grid samples and `grid`
 * holds the shared grid; for the dense backend `grid` is empty.
 */
struct EigenSystemInput {
  Complex lambda{1.0, 0.0};
  std::vector<Vec> basis;
  std::vector<Functional> dual_basis;
  std::optional<int> ascent_hint;
  RealVec grid;  // empty on the dense backend

  int n() const { return static_cast<int>(basis.size()); }
  int m() const { return static_cast<int>(dual_basis.size()); }
};

/// Throws InvalidInput when the system violates its invariants
/// (n >= 1, m >= n, normalization within 1e-12, consistent backend).
void validate(const EigenSystemInput& sys);

/**
 * The Gram matrix G(j,i) = e*_j(e_i) together with its rank/conditioning
 * report and, when G has full column rank, the solved coefficient matrix A
 * with A*G = I_n. For square invertible G, A = G^{-1}; for m > n the
 * Moore-Penrose left inverse (G^H G)^{-1} G^H (conjugate transpose over C).
 */
struct GramSystem {
  enum class Mode { inverse, moore_penrose, singular };

  Mat G;                      // m x n
  int column_rank = 0;
  double condition_estimate = 0.0;  // sigma_max / sigma_min over the first n
  Mat A;                      // n x m; empty when singular
  Mode mode = Mode::singular;
  bool ill_conditioned = false;     // rank full but condition beyond limit
  double solve_residual = 0.0;      // ||A*G - I_n||_inf, 0 when singular
};

GramSystem build_gram(const EigenSystemInput& sys);

/// Returns A; throws GramSingular (carrying the column rank) in singular mode.
Mat solve_coefficients(const GramSystem& g);

/**
 * The assembled projection P = Phi A Phi*: Px = sum_ij a_ij e*_j(x) e_i,
 * realized as an operator on the system's backend.
 */
struct ProjectionOperator {
  Complex lambda{1.0, 0.0};
  std::vector<Vec> basis;
  std::vector<Functional> dual_basis;
  Mat A;
  OperatorHandle realized;
  double idempotency_residual = 0.0;  // ||P^2 - P||
  double basis_residual = 0.0;        // max_i ||P e_i - e_i||_sup
  double coefficient_bound = 0.0;     // sum_ij |a_ij| (upper bound for ||P||)
  int realized_rank = 0;
};

ProjectionOperator build_projection(const EigenSystemInput& sys, const GramSystem& g);

/// Convenience: build_gram + solve + assemble in one step.
ProjectionOperator build_projection(const EigenSystemInput& sys);

/**
 * Whether ker(T - I) separates ker(T* - I): true iff the square Gram matrix
 * is invertible (full rank and condition below the limit). On failure,
 * `witness` holds a nonzero c with sum_j c_j e*_j vanishing on every e_i.
 */
struct SeparationResult {
  bool separated = false;
  std::optional<Vec> witness;
};

SeparationResult separation_check(const EigenSystemInput& sys);

/// Kernel dimensions of (T - lambda I) and (T - lambda I)^2 by singular-value
/// thresholding. ascent_le_one reports whether they agree.
struct AscentDiagnostic {
  int dim_ker_1 = 0;
  int dim_ker_2 = 0;
  bool ascent_le_one = true;
};

AscentDiagnostic ascent_diagnostic(const OperatorHandle& op, Complex lambda);

/// Right and left null-space bases of (T - lambda I) via SVD, packaged as an
/// EigenSystemInput (basis sup-normalized, duals dual-normalized).
/// Throws EmptyEigenspace when lambda has no numerical eigenspace.
EigenSystemInput fixed_point_spaces(const OperatorHandle& op, Complex lambda);

/// Same for the generalized kernels ker(T - lambda I)^p, p >= 1.
EigenSystemInput generalized_kernel_system(const OperatorHandle& op, Complex lambda, int p);

}  // namespace ergolim
