#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ergolim/dense_operator.hpp"
#include "ergolim/gram.hpp"
#include "ergolim/operator_handle.hpp"
#include "ergolim/types.hpp"

namespace ergolim {

enum class Verdict { converged, diverged, oscillating };
enum class StopReason { tolerance_met, max_iters, growth_detected };

const char* to_string(Verdict v);
const char* to_string(StopReason r);

/**
 * Deviations ||T^m - P|| for m = 1.. together with a geometric tail fit
 * deviation ~ C * rate^m and the spectral reference rate (largest
 * non-peripheral eigenvalue modulus). fitted_rate and fitted_C are 0 when
 * fewer than two usable entries exist.
 */
struct ConvergenceReport {
  std::vector<std::pair<int, double>> entries;  // (m, deviation)
  double fitted_rate = 0.0;
  double fitted_C = 0.0;
  double gamma_spectral = 0.0;
  Verdict verdict = Verdict::oscillating;
  StopReason stop_reason = StopReason::max_iters;
};

ConvergenceReport iterate_deviation(const OperatorHandle& op, const ProjectionOperator& p,
                                    int max_m, double tol);

/// Verifies (T - TP)^m = T^m - lambda^m P for m = 1..m_max within 1e-9.
/// Throws CommutationFailed unless TP = PT = lambda P within 1e-10.
bool powers_identity_check(const OperatorHandle& op, const ProjectionOperator& p,
                           Complex lambda, int m_max);

/// Deviations ||a_n(T) - P|| of the Cesaro means a_n = n^{-1} sum_{k<n} T^k.
struct CesaroReport {
  std::vector<std::pair<int, double>> entries;  // (n, deviation)
  Verdict verdict = Verdict::oscillating;
  StopReason stop_reason = StopReason::max_iters;
};

CesaroReport cesaro_deviation(const OperatorHandle& op, const ProjectionOperator& p,
                              int max_n, double tol);

/// The sequence ||T^{n+1} - T^n||, a peripheral-spectrum-triviality
/// diagnostic that needs no eigensolve. tail_monotone reports whether the
/// second half is nonincreasing (within 1e-12).
struct DifferenceDecay {
  std::vector<std::pair<int, double>> entries;
  bool tail_monotone = false;
};

DifferenceDecay difference_decay(const OperatorHandle& op, int max_n);

/**
 * Cyclic-subsequence convergence: chooses k = k_minimal from the peripheral
 * roots of unity, builds the fixed-point projection of T^k at 1, and iterates
 * T^k against it. When k > 1, plain_oscillates records that plain iterates of
 * T keep returning above 0.1 on the sampled window.
 */
struct CyclicIterateResult {
  std::uint64_t k_used = 1;
  ConvergenceReport report;
  ProjectionOperator projection;
  std::optional<bool> plain_oscillates;
};

CyclicIterateResult cyclic_iterate(const DenseOperator& op, double tol, int max_m);

/**
 * Deviations ||T_i^{k_i} - P|| for operators sharing the fixed points of the
 * system behind P (checked within 1e-10; violations throw
 * SharedFixpointViolation). k_seq must be strictly increasing.
 */
struct SharedFixpointResult {
  std::vector<double> deviations;
  bool converged = false;
};

SharedFixpointResult shared_fixpoint_sequence(const std::vector<DenseOperator>& ops,
                                              const ProjectionOperator& p,
                                              const std::vector<int>& k_seq,
                                              double tol = 1e-12);

}  // namespace ergolim
