#include "ergolim/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ergolim/errors.hpp"
#include "ergolim/spectral.hpp"

namespace ergolim {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::diverged: return "diverged";
    case Verdict::oscillating: return "oscillating";
  }
  return "?";
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::tolerance_met: return "tolerance_met";
    case StopReason::max_iters: return "max_iters";
    case StopReason::growth_detected: return "growth_detected";
  }
  return "?";
}

namespace {

constexpr double kGrowthFactor = 10.0;
// Deviations at rounding level would contaminate the geometric fit.
const double kFitFloor = 100.0 * std::numeric_limits<double>::epsilon();

/// Largest eigenvalue modulus strictly inside the peripheral circle.
double subdominant_modulus(const OperatorHandle& op) {
  const Mat& m = op.is_dense() ? op.dense().matrix() : op.finite_rank().node_matrix();
  SpectrumReport report = spectrum(DenseOperator(m));
  double best = 0.0;
  for (const Complex& z : report.eigenvalues) {
    const double mag = std::abs(z);
    if (mag < report.spectral_radius - 1e-9) best = std::max(best, mag);
  }
  return best;
}

void fit_geometric_tail(ConvergenceReport& report) {
  const auto& entries = report.entries;
  std::vector<std::pair<double, double>> points;  // (m, log dev)
  for (size_t i = entries.size() / 2; i < entries.size(); ++i) {
    if (entries[i].second > kFitFloor) {
      points.emplace_back(static_cast<double>(entries[i].first),
                          std::log(entries[i].second));
    }
  }
  if (points.size() < 2) return;
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  if (sxx == 0.0) return;
  const double slope = sxy / sxx;
  report.fitted_rate = std::exp(slope);
  report.fitted_C = std::exp(mean_y - slope * mean_x);
}

/// Exact sup operator norm of alpha*I + F on the grid: at a non-node point x
/// the norm contribution is |alpha| + sum_k |c_k(x)|; at a node t_s the
/// evaluation f(t_s) couples with the identity term, giving
/// |alpha + c_s(t_s)| + sum_{k != s} |c_k(t_s)|.
double affine_identity_norm(Complex alpha, const FiniteRankOperator& f) {
  const Eigen::VectorXd column_sums = f.coeff_samples().cwiseAbs().colwise().sum();
  const double a = std::abs(alpha);
  double best = column_sums.maxCoeff() + a;
  for (int s = 0; s < f.rank_count(); ++s) {
    const int g = f.node_indices()[static_cast<size_t>(s)];
    const Complex cs = f.coeff_samples()(s, g);
    const double corrected = column_sums[g] - std::abs(cs) + std::abs(alpha + cs);
    best = std::max(best, corrected);
  }
  return best;
}

OperatorHandle scale(const OperatorHandle& op, Complex c) {
  return add_scaled(op, c, op, Complex{0.0, 0.0});
}

}  // namespace

ConvergenceReport iterate_deviation(const OperatorHandle& op, const ProjectionOperator& p,
                                    int max_m, double tol) {
  if (op.backend() != p.realized.backend()) {
    throw InvalidInput("operator and projection live on different backends");
  }
  if (tol <= 0.0) throw InvalidInput("tolerance must be positive");
  if (max_m < 1) throw InvalidInput("max iterations must be >= 1");

  ConvergenceReport report;
  report.gamma_spectral = subdominant_modulus(op);

  OperatorHandle current = op;
  double initial = 0.0;
  for (int m = 1; m <= max_m; ++m) {
    if (m > 1) current = compose(current, op);
    const double dev = operator_norm(subtract(current, p.realized));
    report.entries.emplace_back(m, dev);
    if (m == 1) initial = dev;
    if (dev <= tol) {
      report.stop_reason = StopReason::tolerance_met;
      report.verdict = Verdict::converged;
      break;
    }
    if (dev > kGrowthFactor * initial) {
      report.stop_reason = StopReason::growth_detected;
      report.verdict = Verdict::diverged;
      break;
    }
  }
  fit_geometric_tail(report);
  return report;
}

bool powers_identity_check(const OperatorHandle& op, const ProjectionOperator& p,
                           Complex lambda, int m_max) {
  const OperatorHandle& proj = p.realized;
  const OperatorHandle tp = compose(op, proj);
  const OperatorHandle pt = compose(proj, op);
  const OperatorHandle lambda_p = scale(proj, lambda);
  if (operator_norm(subtract(tp, lambda_p)) > 1e-10 ||
      operator_norm(subtract(pt, lambda_p)) > 1e-10) {
    throw CommutationFailed("TP = PT = lambda P does not hold for this pair");
  }

  const OperatorHandle difference = subtract(op, tp);  // T - TP
  OperatorHandle diff_power = difference;
  OperatorHandle op_power = op;
  Complex lambda_power = lambda;
  for (int m = 1; m <= m_max; ++m) {
    if (m > 1) {
      diff_power = compose(diff_power, difference);
      op_power = compose(op_power, op);
      lambda_power *= lambda;
    }
    const OperatorHandle rhs = subtract(op_power, scale(proj, lambda_power));
    if (operator_norm(subtract(diff_power, rhs)) > 1e-9) return false;
  }
  return true;
}

CesaroReport cesaro_deviation(const OperatorHandle& op, const ProjectionOperator& p,
                              int max_n, double tol) {
  if (operator_norm(op) > 1.0 + 1e-12) {
    throw InvalidInput("Cesaro analysis expects a contraction");
  }
  if (op.backend() != p.realized.backend()) {
    throw InvalidInput("operator and projection live on different backends");
  }
  if (tol <= 0.0 || max_n < 1) throw InvalidInput("bad Cesaro parameters");

  CesaroReport report;
  double initial = 0.0;

  if (op.is_dense()) {
    const Mat& t = op.dense().matrix();
    const Mat identity = Mat::Identity(t.rows(), t.cols());
    const Mat& proj = p.realized.dense().matrix();
    Mat partial_sum = identity;  // T^0
    Mat t_power = identity;
    for (int n = 1; n <= max_n; ++n) {
      const Mat diff = partial_sum / static_cast<double>(n) - proj;
      const double dev = diff.cwiseAbs().rowwise().sum().maxCoeff();
      report.entries.emplace_back(n, dev);
      if (n == 1) initial = dev;
      if (dev <= tol) {
        report.stop_reason = StopReason::tolerance_met;
        report.verdict = Verdict::converged;
        return report;
      }
      if (dev > kGrowthFactor * initial && initial > 0.0) {
        report.stop_reason = StopReason::growth_detected;
        report.verdict = Verdict::diverged;
        return report;
      }
      t_power = t_power * t;
      partial_sum += t_power;
    }
    return report;
  }

  // Function backend: a_n contains T^0 = I, which is not finite-rank, so the
  // mean is tracked as (1/n) I plus a finite-rank running sum.
  const FiniteRankOperator& t = op.finite_rank();
  if (!FiniteRankOperator::same_grid(t, p.realized.finite_rank())) {
    throw DimensionMismatch("operator and projection live on different grids");
  }
  OperatorHandle t_power = op;
  Mat coeff_sum = t.coeff_samples();  // sum_{k=1}^{n-1} T^k, coefficientwise
  for (int n = 1; n <= max_n; ++n) {
    double dev = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    if (n == 1) {
      // a_1 = I
      dev = affine_identity_norm(
          Complex{1.0, 0.0},
          FiniteRankOperator(p.realized.finite_rank().nodes(), t.grid(),
                             -p.realized.finite_rank().coeff_samples()));
    } else {
      FiniteRankOperator mean_rank_part(t.nodes(), t.grid(), inv_n * coeff_sum);
      const OperatorHandle diff = subtract(OperatorHandle(std::move(mean_rank_part)),
                                           p.realized);
      dev = affine_identity_norm(Complex{inv_n, 0.0}, diff.finite_rank());
    }
    report.entries.emplace_back(n, dev);
    if (n == 1) initial = dev;
    if (dev <= tol) {
      report.stop_reason = StopReason::tolerance_met;
      report.verdict = Verdict::converged;
      return report;
    }
    if (dev > kGrowthFactor * initial && initial > 0.0) {
      report.stop_reason = StopReason::growth_detected;
      report.verdict = Verdict::diverged;
      return report;
    }
    // coeff_sum must hold sum_{k=1}^{n} T^k before iteration n+1; it already
    // starts as T^1, so the first addition happens after n = 2.
    if (n >= 2 && n < max_n) {
      t_power = compose(t_power, op);
      coeff_sum += t_power.finite_rank().coeff_samples();
    }
  }
  return report;
}

DifferenceDecay difference_decay(const OperatorHandle& op, int max_n) {
  if (operator_norm(op) > 1.0 + 1e-12) {
    throw InvalidInput("difference decay expects a contraction");
  }
  if (max_n < 1) throw InvalidInput("max_n must be >= 1");

  DifferenceDecay out;
  OperatorHandle t_n = op;
  OperatorHandle t_n1 = compose(op, op);
  for (int n = 1; n <= max_n; ++n) {
    out.entries.emplace_back(n, operator_norm(subtract(t_n1, t_n)));
    if (n < max_n) {
      t_n = t_n1;
      t_n1 = compose(t_n1, op);
    }
  }
  out.tail_monotone = true;
  for (size_t i = out.entries.size() / 2; i + 1 < out.entries.size(); ++i) {
    if (out.entries[i + 1].second > out.entries[i].second + 1e-12) {
      out.tail_monotone = false;
      break;
    }
  }
  return out;
}

CyclicIterateResult cyclic_iterate(const DenseOperator& op, double tol, int max_m) {
  const CyclicPowerInfo info = cyclic_power(op);
  const OperatorHandle base(op);
  const OperatorHandle powered = power(base, static_cast<int>(info.k_minimal));

  EigenSystemInput sys = fixed_point_spaces(powered, Complex{1.0, 0.0});
  ProjectionOperator projection = build_projection(sys);
  ConvergenceReport report = iterate_deviation(powered, projection, max_m, tol);

  CyclicIterateResult out{info.k_minimal, std::move(report), std::move(projection), {}};
  if (info.k_minimal > 1) {
    // Plain iterates must keep leaving the projection: sample a window with
    // no early stopping and inspect its tail.
    const int window = std::min(max_m, 64);
    OperatorHandle current = base;
    std::vector<double> devs;
    for (int m = 1; m <= window; ++m) {
      if (m > 1) current = compose(current, base);
      devs.push_back(operator_norm(subtract(current, out.projection.realized)));
    }
    double tail_max = 0.0;
    for (size_t i = devs.size() / 2; i < devs.size(); ++i) {
      tail_max = std::max(tail_max, devs[i]);
    }
    out.plain_oscillates = tail_max >= 0.1;
  }
  return out;
}

SharedFixpointResult shared_fixpoint_sequence(const std::vector<DenseOperator>& ops,
                                              const ProjectionOperator& p,
                                              const std::vector<int>& k_seq,
                                              double tol) {
  if (ops.empty() || ops.size() != k_seq.size()) {
    throw InvalidInput("operator and exponent sequences must match and be nonempty");
  }
  for (size_t i = 0; i + 1 < k_seq.size(); ++i) {
    if (!(k_seq[i] < k_seq[i + 1])) {
      throw InvalidInput("exponent sequence must be strictly increasing");
    }
  }

  SharedFixpointResult out;
  for (size_t i = 0; i < ops.size(); ++i) {
    const OperatorHandle handle(ops[i]);
    for (const Vec& e : p.basis) {
      if ((ergolim::apply(handle, e) - e).cwiseAbs().maxCoeff() > 1e-10) {
        throw SharedFixpointViolation("operator does not fix the reference basis");
      }
    }
    for (const Functional& f : p.dual_basis) {
      if (Functional::distance(adjoint_apply(handle, f), f) > 1e-10) {
        throw SharedFixpointViolation("operator does not fix the reference dual basis");
      }
    }
    const OperatorHandle powered = power(handle, k_seq[i]);
    out.deviations.push_back(operator_norm(subtract(powered, p.realized)));
  }
  out.converged = out.deviations.back() <= tol;
  return out;
}

}  // namespace ergolim
