#pragma once

#include "ergolim/types.hpp"

namespace ergolim {

/**
 * A continuous linear functional in one of two concrete forms.
 *
 * - coordinate: a coefficient vector c acting bilinearly on coordinate
 *   vectors, f(v) = sum_i c_i v_i. Dual fixed points of a matrix T are
 *   therefore rows c with c^T T = lambda c^T.
 * - point_evaluation: a combination sum_j w_j delta_{s_j} of evaluations
 *   at points s_j in [0,1], acting on grid-sampled functions.
 *
 * The dual norm against sup-normed vectors (resp. C[0,1]) is the l1 norm
 * of the coefficient/weight vector; normalized() rescales to dual norm 1.
 */
class Functional {
 public:
  enum class Kind { coordinate, point_evaluation };

  static Functional coordinate(Vec coefficients);
  static Functional point_evaluation(double node, Complex weight = Complex{1.0, 0.0});
  static Functional point_combination(RealVec nodes, Vec weights);

  Kind kind() const { return kind_; }

  /// Coefficient vector (coordinate kind only).
  const Vec& coefficients() const;

  /// Evaluation points / weights (point_evaluation kind only).
  const RealVec& nodes() const;
  const Vec& weights() const;

  /// Bilinear action on a coordinate vector (coordinate kind only).
  Complex operator()(const Vec& v) const;

  /// l1 norm of the coefficient/weight vector (= exact dual norm).
  double dual_norm() const;

  /// Rescaled to dual norm 1; phase-fixed so the largest entry is real positive.
  Functional normalized() const;

  bool is_zero(double eps = 0.0) const;

  /// Functionals agree entrywise within eps (same kind and support).
  static double distance(const Functional& a, const Functional& b);

 private:
  Functional(Kind kind, Vec coeffs, RealVec nodes)
      : kind_(kind), coefficients_(std::move(coeffs)), nodes_(std::move(nodes)) {}

  Kind kind_;
  Vec coefficients_;  // coordinate coefficients, or point weights
  RealVec nodes_;     // empty for coordinate kind
};

/// Evaluate a functional against grid samples of a function on `grid`.
/// Point-evaluation nodes must coincide with grid points (within snap tolerance).
Complex evaluate_on_grid(const Functional& f, const Vec& samples, const RealVec& grid);

/// Index of `t` in a strictly increasing grid, or -1 if no point is within tolerance.
int grid_index(const RealVec& grid, double t, double eps = tol::node_snap);

}  // namespace ergolim
