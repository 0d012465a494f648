#include "ergolim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ergolim/errors.hpp"
#include "ergolim/operator_handle.hpp"

namespace ergolim {

namespace {

constexpr double kPeripheralTol = 1e-9;
constexpr double kRootOfUnityTol = 1e-8;
constexpr int kMaxDim = 512;

std::vector<Complex> sorted_eigenvalues(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error("eigenvalue solver did not converge");
  }
  std::vector<Complex> values(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-14) return ma > mb;
    return std::arg(a) < std::arg(b);
  });
  return values;
}

/// Minimal q <= max_order with |z^q - 1| <= tol, or 0 when none exists.
int root_of_unity_order(Complex z, int max_order) {
  Complex zq = z;
  for (int q = 1; q <= max_order; ++q) {
    if (std::abs(zq - Complex{1.0, 0.0}) <= kRootOfUnityTol) return q;
    zq *= z;
  }
  return 0;
}

}  // namespace

SpectrumReport spectrum(const DenseOperator& op) {
  if (op.dim() > kMaxDim) {
    throw InvalidInput("spectrum: dimension exceeds the desk-scale limit of 512");
  }
  SpectrumReport out;
  out.eigenvalues = sorted_eigenvalues(op.matrix());
  out.spectral_radius = std::abs(out.eigenvalues.front());

  for (const Complex& z : out.eigenvalues) {
    if (std::abs(z) < out.spectral_radius - kPeripheralTol) continue;
    const bool seen = std::any_of(out.peripheral.begin(), out.peripheral.end(),
                                  [&](const Complex& w) { return std::abs(w - z) <= 1e-8; });
    if (!seen) out.peripheral.push_back(z);
  }

  bool all_roots = true;
  std::uint64_t lcm_order = 1;
  for (const Complex& z : out.peripheral) {
    const int q = root_of_unity_order(z, op.dim());
    if (q == 0) {
      all_roots = false;
      break;
    }
    lcm_order = std::lcm(lcm_order, static_cast<std::uint64_t>(q));
  }
  out.peripheral_are_roots_of_unity = all_roots;
  if (all_roots) out.cyclic_order_l = lcm_order;
  return out;
}

std::vector<EigenSystemInput> peripheral_eigensystems(const DenseOperator& op) {
  SpectrumReport report = spectrum(op);
  std::vector<EigenSystemInput> systems;
  systems.reserve(report.peripheral.size());
  for (const Complex& lambda : report.peripheral) {
    systems.push_back(fixed_point_spaces(OperatorHandle(op), lambda));
  }
  return systems;
}

CyclicPowerInfo cyclic_power(const DenseOperator& op) {
  if (!op.markov() && operator_norm(OperatorHandle(op)) > 1.0 + 1e-12) {
    throw InvalidInput("cyclic power analysis expects a contraction (or markov flag)");
  }
  SpectrumReport report = spectrum(op);
  if (!report.peripheral_are_roots_of_unity) {
    throw NotCyclic("peripheral spectrum contains a value that is no root of unity");
  }

  CyclicPowerInfo out;
  out.l = static_cast<int>(report.peripheral.size());
  std::uint64_t lcm_order = 1;
  for (const Complex& z : report.peripheral) {
    lcm_order = std::lcm(lcm_order,
                         static_cast<std::uint64_t>(root_of_unity_order(z, op.dim())));
  }
  out.k_minimal = lcm_order;

  if (out.l <= 20) {
    std::uint64_t factorial = 1;
    for (int i = 2; i <= out.l; ++i) factorial *= static_cast<std::uint64_t>(i);
    out.k_paper = factorial;
  }

  // Spectral mapping check: the peripheral spectrum of T^k must collapse
  // onto {1} for both exponents.
  auto collapses = [&](std::uint64_t k) {
    for (const Complex& z : report.eigenvalues) {
      const Complex zk = std::pow(z, static_cast<double>(k));
      if (std::abs(zk) >= 1.0 - kPeripheralTol &&
          std::abs(zk - Complex{1.0, 0.0}) > 1e-6) {
        return false;
      }
    }
    return true;
  };
  if (!collapses(out.k_minimal) || (out.k_paper && !collapses(*out.k_paper))) {
    throw NotCyclic("powered peripheral spectrum failed to collapse onto {1}");
  }
  return out;
}

ContourProjection contour_projection(const DenseOperator& op, Complex lambda,
                                     double radius, int n_quad) {
  if (radius <= 0.0) throw InvalidInput("contour radius must be positive");
  if (n_quad < 16) throw InvalidInput("contour quadrature needs at least 16 points");

  SpectrumReport report = spectrum(op);
  for (const Complex& z : report.eigenvalues) {
    if (std::abs(std::abs(z - lambda) - radius) < radius * 1e-3) {
      throw ContourTooTight("an eigenvalue lies too close to the contour");
    }
  }

  const int n = op.dim();
  const Mat identity = Mat::Identity(n, n);
  Mat acc = Mat::Zero(n, n);
  const double norm_t = op.matrix().cwiseAbs().rowwise().sum().maxCoeff();

  // Trapezoid rule for (1/2 pi i) * integral of (z I - T)^{-1} dz over the
  // circle z = lambda + radius * e^{i theta}; fixed summation order keeps the
  // output bit-stable.
  for (int j = 0; j < n_quad; ++j) {
    const double theta = 2.0 * M_PI * static_cast<double>(j) / n_quad;
    const Complex direction{std::cos(theta), std::sin(theta)};
    const Complex z = lambda + radius * direction;
    const Mat shifted = z * identity - op.matrix();
    Eigen::PartialPivLU<Mat> lu(shifted);
    const Mat resolvent = lu.solve(identity);
    const double kappa = resolvent.cwiseAbs().rowwise().sum().maxCoeff() *
                         (std::abs(z) + norm_t);
    if (kappa > tol::condition_limit) {
      throw ContourTooTight("resolvent too ill-conditioned on the contour");
    }
    acc += direction * resolvent;
  }
  Mat p = (radius / n_quad) * acc;

  const double residual = (p * p - p).cwiseAbs().rowwise().sum().maxCoeff();
  if (residual > 1e-6) {
    throw ContourFailed("contour quadrature produced a non-idempotent operator");
  }
  ContourProjection out{lambda, radius, n_quad, DenseOperator(std::move(p)), residual};
  return out;
}

EssentialRadiusNote essential_radius_note(const OperatorHandle& op) {
  EssentialRadiusNote out;
  out.essential_radius = 0.0;  // finite rank in every backend
  const Mat& subject =
      op.is_dense() ? op.dense().matrix() : op.finite_rank().coeff_samples();
  Eigen::JacobiSVD<Mat> svd(subject);
  const auto& sv = svd.singularValues();
  if (sv.size() > 0 && sv[0] > 0.0) {
    const double cutoff = tol::rank_rel * sv[0];
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv[i] > cutoff) ++out.rank;
    }
  }
  return out;
}

}  // namespace ergolim
