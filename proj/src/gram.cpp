#include "ergolim/gram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ergolim/errors.hpp"

namespace ergolim {

namespace {

Complex apply_dual(const EigenSystemInput& sys, int j, int i) {
  const Functional& f = sys.dual_basis[static_cast<size_t>(j)];
  const Vec& e = sys.basis[static_cast<size_t>(i)];
  if (f.kind() == Functional::Kind::coordinate) {
    return f(e);
  }
  if (sys.grid.size() == 0) {
    throw InvalidInput("point-evaluation functionals require a grid");
  }
  return evaluate_on_grid(f, e, sys.grid);
}

void structural_check(const EigenSystemInput& sys) {
  if (sys.basis.empty()) {
    throw InvalidInput("eigen system has an empty basis");
  }
  if (sys.m() < sys.n()) {
    throw InvalidInput("eigen system needs at least as many functionals as basis vectors");
  }
  const Eigen::Index len = sys.basis.front().size();
  for (const Vec& e : sys.basis) {
    if (e.size() != len) {
      throw DimensionMismatch("basis vectors of differing length");
    }
  }
  for (const Functional& f : sys.dual_basis) {
    if (f.kind() != sys.dual_basis.front().kind()) {
      throw InvalidInput("mixed functional kinds in one dual basis");
    }
    if (f.kind() == Functional::Kind::coordinate && f.coefficients().size() != len) {
      throw DimensionMismatch("coordinate functional length does not match basis");
    }
  }
  if (sys.grid.size() > 0 && len != sys.grid.size()) {
    throw DimensionMismatch("basis samples do not match the grid");
  }
}

/// Scale so the entry of largest modulus becomes exactly 1 (sup norm 1).
Vec sup_normalize(const Vec& v) {
  Eigen::Index imax = 0;
  const double largest = v.cwiseAbs().maxCoeff(&imax);
  if (largest == 0.0) {
    throw InvalidInput("cannot normalize a zero vector");
  }
  return v / v[imax];
}

struct KernelPair {
  std::vector<Vec> right;  // ker(M)
  std::vector<Vec> left;   // rows c with c^T M = 0 (bilinear convention)
};

// The cutoff is taken relative to max(sigma_max, scale): a matrix that is
// zero up to rounding (sigma_max ~ 1e-16 instead of exactly 0) must still
// count as rank-deficient, so the caller supplies the natural scale of the
// problem (e.g. ||T|| + |lambda| for a shifted operator).
KernelPair numerical_kernels(const Mat& M, double scale) {
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff =
      sv.size() > 0 ? tol::rank_rel * std::max(sv[0], scale) : 0.0;
  KernelPair out;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] <= cutoff) {
      out.right.push_back(svd.matrixV().col(i));
      // ker(M^H) = span of the matching U columns; conjugating turns a
      // vector u with M^H u = 0 into c with c^T M = 0.
      out.left.push_back(svd.matrixU().col(i).conjugate());
    }
  }
  return out;
}

int numerical_rank(const Mat& M, double scale) {
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  const double cutoff = tol::rank_rel * std::max(sv[0], scale);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }
  return rank;
}

OperatorHandle realize(const EigenSystemInput& sys, const Mat& A) {
  const int n = sys.n();
  const int m = sys.m();
  const Eigen::Index dim = sys.basis.front().size();

  if (sys.dual_basis.front().kind() == Functional::Kind::coordinate) {
    Mat basis_cols(dim, n);
    for (int i = 0; i < n; ++i) basis_cols.col(i) = sys.basis[static_cast<size_t>(i)];
    Mat dual_rows(m, dim);
    for (int j = 0; j < m; ++j) {
      dual_rows.row(j) = sys.dual_basis[static_cast<size_t>(j)].coefficients().transpose();
    }
    return DenseOperator(basis_cols * A * dual_rows, false);
  }

  // Point-evaluation duals: P becomes a finite-rank operator whose nodes are
  // the union of the functionals' evaluation points.
  if (sys.grid.size() == 0) {
    throw InvalidInput("realizing a grid operator requires the grid");
  }
  std::vector<int> union_indices;
  for (const Functional& f : sys.dual_basis) {
    for (Eigen::Index r = 0; r < f.nodes().size(); ++r) {
      const int idx = grid_index(sys.grid, f.nodes()[r]);
      if (idx < 0) {
        throw FunctionalNotRepresentable("functional node is not a grid point");
      }
      union_indices.push_back(idx);
    }
  }
  std::sort(union_indices.begin(), union_indices.end());
  union_indices.erase(std::unique(union_indices.begin(), union_indices.end()),
                      union_indices.end());
  const int r_count = static_cast<int>(union_indices.size());

  Mat weights = Mat::Zero(m, r_count);
  for (int j = 0; j < m; ++j) {
    const Functional& f = sys.dual_basis[static_cast<size_t>(j)];
    for (Eigen::Index q = 0; q < f.nodes().size(); ++q) {
      const int idx = grid_index(sys.grid, f.nodes()[q]);
      const auto it = std::lower_bound(union_indices.begin(), union_indices.end(), idx);
      weights(j, static_cast<int>(it - union_indices.begin())) += f.weights()[q];
    }
  }

  Mat basis_rows(n, dim);
  for (int i = 0; i < n; ++i) basis_rows.row(i) = sys.basis[static_cast<size_t>(i)].transpose();

  RealVec nodes(r_count);
  for (int r = 0; r < r_count; ++r) nodes[r] = sys.grid[union_indices[static_cast<size_t>(r)]];

  Mat coeffs = (A * weights).transpose() * basis_rows;  // r_count x dim
  return FiniteRankOperator(std::move(nodes), sys.grid, std::move(coeffs), false);
}

}  // namespace

void validate(const EigenSystemInput& sys) {
  structural_check(sys);
  for (const Vec& e : sys.basis) {
    if (std::abs(e.cwiseAbs().maxCoeff() - 1.0) > 1e-12) {
      throw InvalidInput("basis vectors must be sup-normalized");
    }
  }
  for (const Functional& f : sys.dual_basis) {
    if (std::abs(f.dual_norm() - 1.0) > 1e-12) {
      throw InvalidInput("dual functionals must have dual norm 1");
    }
  }
  if (sys.ascent_hint && *sys.ascent_hint < 1) {
    throw InvalidInput("ascent hint must be positive");
  }
}

GramSystem build_gram(const EigenSystemInput& sys) {
  structural_check(sys);
  const int n = sys.n();
  const int m = sys.m();

  GramSystem out;
  out.G.resize(m, n);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      out.G(j, i) = apply_dual(sys, j, i);
    }
  }

  Eigen::JacobiSVD<Mat> svd(out.G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv[0] : 0.0;
  // Normalized bases and duals put Gram entries on scale 1, so the rank
  // decision keeps an absolute floor of that scale.
  const double cutoff = tol::rank_rel * std::max(sigma_max, 1.0);
  out.column_rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sigma_max > 0.0 && sv[i] > cutoff) ++out.column_rank;
  }
  const double sigma_min = sv.size() > 0 ? sv[sv.size() - 1] : 0.0;
  out.condition_estimate = sigma_min > 0.0 ? sigma_max / sigma_min
                                           : std::numeric_limits<double>::infinity();

  if (out.column_rank < n) {
    out.mode = GramSystem::Mode::singular;
    return out;
  }
  if (out.condition_estimate > tol::condition_limit) {
    out.mode = GramSystem::Mode::singular;
    out.ill_conditioned = true;
    return out;
  }

  // Moore-Penrose left inverse via the SVD; coincides with G^{-1} for square
  // invertible G and with (G^H G)^{-1} G^H otherwise.
  Vec inv_sv(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) inv_sv[i] = Complex{1.0 / sv[i], 0.0};
  out.A = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
  out.mode = (m == n) ? GramSystem::Mode::inverse : GramSystem::Mode::moore_penrose;
  out.solve_residual =
      (out.A * out.G - Mat::Identity(n, n)).cwiseAbs().rowwise().sum().maxCoeff();
  return out;
}

Mat solve_coefficients(const GramSystem& g) {
  if (g.mode == GramSystem::Mode::singular) {
    throw GramSingular(
        g.ill_conditioned
            ? "gram matrix too ill-conditioned to invert"
            : "gram matrix lacks full column rank",
        g.column_rank);
  }
  return g.A;
}

ProjectionOperator build_projection(const EigenSystemInput& sys, const GramSystem& g) {
  Mat A = solve_coefficients(g);

  ProjectionOperator p{sys.lambda, sys.basis, sys.dual_basis, A, realize(sys, A)};
  p.coefficient_bound = A.cwiseAbs().sum();

  const OperatorHandle& P = p.realized;
  p.idempotency_residual = operator_norm(subtract(compose(P, P), P));
  double worst = 0.0;
  for (const Vec& e : sys.basis) {
    worst = std::max(worst, (ergolim::apply(P, e) - e).cwiseAbs().maxCoeff());
  }
  p.basis_residual = worst;
  p.realized_rank = P.is_dense() ? numerical_rank(P.dense().matrix(), 0.0)
                                 : numerical_rank(P.finite_rank().coeff_samples(), 0.0);
  return p;
}

ProjectionOperator build_projection(const EigenSystemInput& sys) {
  return build_projection(sys, build_gram(sys));
}

SeparationResult separation_check(const EigenSystemInput& sys) {
  if (sys.m() != sys.n()) {
    throw DimensionMismatch("separation check requires as many functionals as basis vectors");
  }
  GramSystem g = build_gram(sys);
  SeparationResult out;
  out.separated = g.mode == GramSystem::Mode::inverse;
  if (!out.separated) {
    // A nonzero c with sum_j c_j e*_j vanishing on every e_i, i.e. G^T c = 0.
    Eigen::JacobiSVD<Mat> svd(g.G, Eigen::ComputeFullU);
    Vec witness = svd.matrixU().col(svd.matrixU().cols() - 1).conjugate();
    out.witness = sup_normalize(witness);
  }
  return out;
}

AscentDiagnostic ascent_diagnostic(const OperatorHandle& op, Complex lambda) {
  if (!op.is_dense()) {
    throw InvalidInput(
        "ascent diagnostic needs the dense backend; materialize a finite-rank "
        "operator through its node matrix first");
  }
  const Mat& t = op.dense().matrix();
  const Mat shifted = t - lambda * Mat::Identity(t.rows(), t.cols());
  const int n = static_cast<int>(t.rows());
  const double scale =
      t.cwiseAbs().rowwise().sum().maxCoeff() + std::abs(lambda);

  AscentDiagnostic out;
  out.dim_ker_1 = n - numerical_rank(shifted, scale);
  out.dim_ker_2 = n - numerical_rank(shifted * shifted, scale * scale);
  out.ascent_le_one = out.dim_ker_1 == out.dim_ker_2;
  return out;
}

EigenSystemInput generalized_kernel_system(const OperatorHandle& op, Complex lambda, int p) {
  if (!op.is_dense()) {
    throw InvalidInput(
        "fixed-point spaces need the dense backend; materialize a finite-rank "
        "operator through its node matrix first");
  }
  if (p < 1) {
    throw InvalidInput("kernel power must be >= 1");
  }
  const Mat& t = op.dense().matrix();
  Mat shifted = t - lambda * Mat::Identity(t.rows(), t.cols());
  Mat powered = shifted;
  for (int i = 1; i < p; ++i) powered = powered * shifted;
  const double scale = std::pow(
      t.cwiseAbs().rowwise().sum().maxCoeff() + std::abs(lambda), p);

  KernelPair kernels = numerical_kernels(powered, scale);
  if (kernels.right.empty()) {
    throw EmptyEigenspace("no numerical eigenspace at the requested eigenvalue");
  }

  EigenSystemInput sys;
  sys.lambda = lambda;
  sys.ascent_hint = p;
  for (const Vec& v : kernels.right) {
    sys.basis.push_back(sup_normalize(v));
  }
  for (const Vec& c : kernels.left) {
    sys.dual_basis.push_back(Functional::coordinate(c).normalized());
  }
  return sys;
}

EigenSystemInput fixed_point_spaces(const OperatorHandle& op, Complex lambda) {
  return generalized_kernel_system(op, lambda, 1);
}

}  // namespace ergolim
