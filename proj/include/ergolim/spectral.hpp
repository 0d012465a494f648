#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ergolim/dense_operator.hpp"
#include "ergolim/gram.hpp"
#include "ergolim/types.hpp"

namespace ergolim {

/**
 * Full spectrum of a dense operator with peripheral-set analysis.
 *
 * `peripheral` lists the distinct spectral values of maximal modulus
 * (|lambda| >= r - 1e-9, deduplicated within 1e-8). Each peripheral value is
 * tested for being a root of unity (|lambda^q - 1| <= 1e-8 for some q <= n);
 * when all are, cyclic_order_l is the lcm of the minimal orders.
 */
struct SpectrumReport {
  std::vector<Complex> eigenvalues;  // with multiplicity, sorted by (-|z|, arg)
  double spectral_radius = 0.0;
  std::vector<Complex> peripheral;   // distinct
  bool peripheral_are_roots_of_unity = false;
  std::optional<std::uint64_t> cyclic_order_l;
};

SpectrumReport spectrum(const DenseOperator& op);

/// One fixed-point system per distinct peripheral eigenvalue.
std::vector<EigenSystemInput> peripheral_eigensystems(const DenseOperator& op);

/**
 * Powers that collapse a cyclic peripheral spectrum onto {1}:
 * l peripheral values, k_minimal = lcm of their orders as roots of unity,
 * k_paper = l! (absent when l! would overflow 64 bits). Throws NotCyclic if
 * some peripheral value is not a root of unity within tolerance.
 */
struct CyclicPowerInfo {
  int l = 0;
  std::uint64_t k_minimal = 1;
  std::optional<std::uint64_t> k_paper;
};

CyclicPowerInfo cyclic_power(const DenseOperator& op);

/**
 * Spectral projection by resolvent quadrature: the trapezoid rule applied to
 * (1/2 pi i) times the contour integral of (z I - T)^{-1} over the circle
 * |z - lambda| = radius. (The sign is chosen so that P is idempotent with
 * trace equal to the algebraic multiplicity.)
 */
struct ContourProjection {
  Complex center;
  double radius = 0.0;
  int quadrature_points = 0;
  DenseOperator P;
  double idempotency_residual = 0.0;
};

ContourProjection contour_projection(const DenseOperator& op, Complex lambda,
                                     double radius, int n_quad);

/// Finite-rank operators have essential spectral radius 0; the record carries
/// the numerical rank alongside for the quasi-compactness note.
struct EssentialRadiusNote {
  int rank = 0;
  double essential_radius = 0.0;
};

EssentialRadiusNote essential_radius_note(const OperatorHandle& op);

}  // namespace ergolim
