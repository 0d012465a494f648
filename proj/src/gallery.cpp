#include "ergolim/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ergolim/errors.hpp"
#include "ergolim/spectral.hpp"

namespace ergolim {

const char* to_string(GallerySpec::Kind kind) {
  switch (kind) {
    case GallerySpec::Kind::intro_hat: return "intro_hat";
    case GallerySpec::Kind::bernstein: return "bernstein";
    case GallerySpec::Kind::schoenberg: return "schoenberg";
    case GallerySpec::Kind::stochastic_random: return "stochastic_random";
    case GallerySpec::Kind::periodic_permutation: return "periodic_permutation";
    case GallerySpec::Kind::mixed_chain: return "mixed_chain";
  }
  return "?";
}

GallerySpec GallerySpec::intro_hat(int grid_points) {
  GallerySpec s;
  s.kind = Kind::intro_hat;
  s.grid_points = grid_points;
  return s;
}

GallerySpec GallerySpec::bernstein(int n, int grid_points) {
  GallerySpec s;
  s.kind = Kind::bernstein;
  s.n = n;
  s.grid_points = grid_points;
  return s;
}

GallerySpec GallerySpec::schoenberg(int degree, int segments, int grid_points) {
  GallerySpec s;
  s.kind = Kind::schoenberg;
  s.degree = degree;
  s.segments = segments;
  s.grid_points = grid_points;
  return s;
}

GallerySpec GallerySpec::stochastic_random(int n, std::uint64_t seed) {
  GallerySpec s;
  s.kind = Kind::stochastic_random;
  s.n = n;
  s.seed = seed;
  return s;
}

GallerySpec GallerySpec::periodic_permutation(int n) {
  GallerySpec s;
  s.kind = Kind::periodic_permutation;
  s.n = n;
  return s;
}

GallerySpec GallerySpec::mixed_chain(double alpha) {
  GallerySpec s;
  s.kind = Kind::mixed_chain;
  s.alpha = alpha;
  return s;
}

namespace {

/// Uniform grid with about 1000 subintervals whose count is divisible by
/// `denominator`, so that every node k/denominator is a grid point.
RealVec uniform_grid(int denominator, int requested_points) {
  int points = requested_points;
  if (points <= 0) {
    const int factor = std::max(1, static_cast<int>(std::lround(1000.0 / denominator)));
    points = factor * denominator + 1;
  }
  if (points < denominator + 1 || (points - 1) % denominator != 0) {
    throw InvalidInput("grid resolution cannot host the requested nodes");
  }
  return RealVec::LinSpaced(points, 0.0, 1.0);
}

/// Pf = f(0)(1-x) + f(1)x, the linear interpolation at the endpoints.
FiniteRankOperator endpoint_interpolation_limit(const RealVec& grid) {
  Mat coeffs(2, grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    coeffs(0, i) = 1.0 - grid[i];
    coeffs(1, i) = grid[i];
  }
  RealVec nodes(2);
  nodes << 0.0, 1.0;
  return FiniteRankOperator(std::move(nodes), grid, std::move(coeffs), true);
}

/// Grid samples of 1 and of x, with the point evaluations at 0 and 1:
/// the fixed-point data every partition-of-unity gallery operator shares.
EigenSystemInput affine_eigensystem(const RealVec& grid) {
  EigenSystemInput sys;
  sys.lambda = Complex{1.0, 0.0};
  sys.grid = grid;
  Vec ones = Vec::Ones(grid.size());
  Vec x(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) x[i] = grid[i];
  sys.basis = {std::move(ones), std::move(x)};
  sys.dual_basis = {Functional::point_evaluation(0.0), Functional::point_evaluation(1.0)};
  sys.ascent_hint = 1;
  return sys;
}

GalleryEntry make_intro_hat(const GallerySpec& spec) {
  const RealVec grid = uniform_grid(2, spec.grid_points);
  const Eigen::Index g = grid.size();

  // Flattened piecewise-linear hats: the middle function peaks at 1/2 with
  // height 1/2 instead of 1. Nodal hats would make T the piecewise-linear
  // interpolation, which is already a projection and never leaves itself;
  // flattening keeps ker(T - I) = span(1, x).
  Mat coeffs(3, g);
  for (Eigen::Index i = 0; i < g; ++i) {
    const double x = grid[i];
    const double m = std::min(x, 1.0 - x);
    coeffs(0, i) = 1.0 - x - 0.5 * m;
    coeffs(1, i) = m;
    coeffs(2, i) = x - 0.5 * m;
  }
  RealVec nodes(3);
  nodes << 0.0, 0.5, 1.0;
  FiniteRankOperator op(std::move(nodes), grid, std::move(coeffs), true);

  GalleryEntry entry{OperatorHandle(std::move(op)), affine_eigensystem(grid),
                     OperatorHandle(endpoint_interpolation_limit(grid)),
                     "f -> f(0) + (f(1) - f(0)) x", 0};
  return entry;
}

/// All n+1 Bernstein basis values at x by the stable degree-raising recurrence.
void bernstein_row(int n, double x, std::vector<double>& out) {
  out.assign(static_cast<size_t>(n) + 1, 0.0);
  out[0] = 1.0;
  const double y = 1.0 - x;
  for (int d = 1; d <= n; ++d) {
    out[static_cast<size_t>(d)] = x * out[static_cast<size_t>(d - 1)];
    for (int k = d - 1; k >= 1; --k) {
      out[static_cast<size_t>(k)] =
          y * out[static_cast<size_t>(k)] + x * out[static_cast<size_t>(k - 1)];
    }
    out[0] *= y;
  }
}

GalleryEntry make_bernstein(const GallerySpec& spec) {
  if (spec.n < 1) throw InvalidInput("bernstein degree must be >= 1");
  const int n = spec.n;
  const RealVec grid = uniform_grid(n, spec.grid_points);
  const Eigen::Index g = grid.size();

  Mat coeffs(n + 1, g);
  std::vector<double> row;
  for (Eigen::Index i = 0; i < g; ++i) {
    bernstein_row(n, grid[i], row);
    for (int k = 0; k <= n; ++k) coeffs(k, i) = row[static_cast<size_t>(k)];
  }
  RealVec nodes(n + 1);
  for (int k = 0; k <= n; ++k) nodes[k] = static_cast<double>(k) / n;
  FiniteRankOperator op(std::move(nodes), grid, std::move(coeffs), true);

  GalleryEntry entry{OperatorHandle(std::move(op)), affine_eigensystem(grid),
                     OperatorHandle(endpoint_interpolation_limit(grid)),
                     "f -> f(0) + (f(1) - f(0)) x", 0};
  return entry;
}

/// Open uniform knot vector on [0,1]: multiplicity degree+1 at both ends,
/// `segments` uniform spans between.
std::vector<double> open_uniform_knots(int degree, int segments) {
  std::vector<double> knots;
  knots.reserve(static_cast<size_t>(2 * (degree + 1) + segments - 1));
  for (int i = 0; i <= degree; ++i) knots.push_back(0.0);
  for (int i = 1; i < segments; ++i) {
    knots.push_back(static_cast<double>(i) / segments);
  }
  for (int i = 0; i <= degree; ++i) knots.push_back(1.0);
  return knots;
}

/// B-spline basis values at x (Cox-de Boor, all basis functions).
void bspline_row(const std::vector<double>& knots, int degree, double x,
                 std::vector<double>& out) {
  const int basis_count = static_cast<int>(knots.size()) - degree - 1;
  out.assign(static_cast<size_t>(basis_count), 0.0);

  // Knot span containing x; the last span absorbs x = 1.
  int span = basis_count - 1;
  if (x < knots.back()) {
    span = degree;
    while (span < basis_count - 1 && x >= knots[static_cast<size_t>(span + 1)]) ++span;
  }

  std::vector<double> active(static_cast<size_t>(degree) + 1, 0.0);
  std::vector<double> left(static_cast<size_t>(degree) + 1, 0.0);
  std::vector<double> right(static_cast<size_t>(degree) + 1, 0.0);
  active[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    left[static_cast<size_t>(j)] = x - knots[static_cast<size_t>(span + 1 - j)];
    right[static_cast<size_t>(j)] = knots[static_cast<size_t>(span + j)] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[static_cast<size_t>(r + 1)] + left[static_cast<size_t>(j - r)];
      const double temp = active[static_cast<size_t>(r)] / denom;
      active[static_cast<size_t>(r)] = saved + right[static_cast<size_t>(r + 1)] * temp;
      saved = left[static_cast<size_t>(j - r)] * temp;
    }
    active[static_cast<size_t>(j)] = saved;
  }
  for (int j = 0; j <= degree; ++j) {
    out[static_cast<size_t>(span - degree + j)] = active[static_cast<size_t>(j)];
  }
}

GalleryEntry make_schoenberg(const GallerySpec& spec) {
  if (spec.degree < 1) throw InvalidInput("schoenberg degree must be >= 1");
  if (spec.segments < 1) throw InvalidInput("schoenberg needs at least one knot span");
  const int d = spec.degree;
  const int s = spec.segments;
  const std::vector<double> knots = open_uniform_knots(d, s);
  const int basis_count = s + d;

  // Greville abscissae: averages of d consecutive knots; multiples of
  // 1/(d*s), so the grid denominator is d*s.
  RealVec nodes(basis_count);
  for (int k = 0; k < basis_count; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= d; ++j) acc += knots[static_cast<size_t>(k + j)];
    nodes[k] = acc / d;
  }
  const RealVec grid = uniform_grid(d * s, spec.grid_points);
  const Eigen::Index g = grid.size();

  Mat coeffs(basis_count, g);
  std::vector<double> row;
  for (Eigen::Index i = 0; i < g; ++i) {
    bspline_row(knots, d, grid[i], row);
    for (int k = 0; k < basis_count; ++k) coeffs(k, i) = row[static_cast<size_t>(k)];
  }
  FiniteRankOperator op(nodes, grid, std::move(coeffs), true);

  GalleryEntry entry{OperatorHandle(std::move(op)), {}, {}, "", 0};
  if (d >= 2) {
    // Degree 1 is nodal interpolation (already a projection); only from
    // degree 2 on is the fixed space exactly span(1, x).
    entry.known_eigensystem = affine_eigensystem(grid);
    entry.known_limit = OperatorHandle(endpoint_interpolation_limit(grid));
    entry.limit_description = "f -> f(0) + (f(1) - f(0)) x";
  } else {
    entry.limit_description =
        "degree-1 Schoenberg operator is the piecewise-linear interpolation projection";
  }
  return entry;
}

GalleryEntry make_stochastic_random(const GallerySpec& spec) {
  if (spec.n < 2) throw InvalidInput("stochastic matrix dimension must be >= 2");
  std::uint64_t seed = spec.seed;
  for (int attempt = 0; attempt < 100; ++attempt, ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd rows(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < spec.n; ++j) rows(i, j) = dist(rng);
      const double sum = rows.row(i).sum();
      if (sum <= 0.0) break;
      rows.row(i) /= sum;
    }
    DenseOperator op(rows.cast<Complex>(), true);
    SpectrumReport report = spectrum(op);
    if (report.peripheral.size() != 1 ||
        std::abs(report.peripheral.front() - Complex{1.0, 0.0}) > 1e-8) {
      continue;  // not primitive at this seed, regenerate
    }
    EigenSystemInput sys = fixed_point_spaces(OperatorHandle(op), Complex{1.0, 0.0});
    ProjectionOperator proj = build_projection(sys);
    GalleryEntry entry{OperatorHandle(op), std::move(sys), proj.realized,
                       "rank-one projection onto the stationary distribution", seed};
    return entry;
  }
  throw Error("failed to draw a primitive stochastic matrix in 100 attempts");
}

GalleryEntry make_periodic_permutation(const GallerySpec& spec) {
  if (spec.n < 1) throw InvalidInput("cycle length must be >= 1");
  const int n = spec.n;
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, (i + 1) % n) = 1.0;
  DenseOperator op(std::move(m), true);

  EigenSystemInput sys;
  sys.lambda = Complex{1.0, 0.0};
  sys.basis = {Vec::Ones(n)};
  sys.dual_basis = {Functional::coordinate(Vec::Constant(n, Complex{1.0 / n, 0.0}))};
  sys.ascent_hint = 1;

  GalleryEntry entry{OperatorHandle(std::move(op)), std::move(sys), {}, "", 0};
  if (n == 1) {
    entry.known_limit = entry.op;
    entry.limit_description = "identity";
  } else {
    entry.limit_description =
        "plain iterates oscillate; the iterates of T^n converge to the "
        "projection onto the constants";
  }
  return entry;
}

GalleryEntry make_mixed_chain(const GallerySpec& spec) {
  if (!(spec.alpha > 0.0 && spec.alpha <= 1.0)) {
    throw InvalidInput("mixing parameter must lie in (0, 1]");
  }
  Mat t0(2, 2);
  t0 << 0.9, 0.1, 0.2, 0.8;
  Mat p0(2, 2);
  p0 << 2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0;
  DenseOperator op(spec.alpha * t0 + (1.0 - spec.alpha) * p0, true);

  EigenSystemInput sys;
  sys.lambda = Complex{1.0, 0.0};
  sys.basis = {Vec::Ones(2)};
  Vec pi(2);
  pi << 2.0 / 3.0, 1.0 / 3.0;
  sys.dual_basis = {Functional::coordinate(std::move(pi))};
  sys.ascent_hint = 1;

  GalleryEntry entry{OperatorHandle(std::move(op)), std::move(sys),
                     OperatorHandle(DenseOperator(std::move(p0), true)),
                     "rank-one projection onto the stationary distribution (2/3, 1/3)", 0};
  return entry;
}

}  // namespace

GalleryEntry make(const GallerySpec& spec) {
  switch (spec.kind) {
    case GallerySpec::Kind::intro_hat: return make_intro_hat(spec);
    case GallerySpec::Kind::bernstein: return make_bernstein(spec);
    case GallerySpec::Kind::schoenberg: return make_schoenberg(spec);
    case GallerySpec::Kind::stochastic_random: return make_stochastic_random(spec);
    case GallerySpec::Kind::periodic_permutation: return make_periodic_permutation(spec);
    case GallerySpec::Kind::mixed_chain: return make_mixed_chain(spec);
  }
  throw InvalidInput("unknown gallery kind");
}

MarkovChecks verify_markov(const OperatorHandle& op, bool expect_linear_reproduction) {
  MarkovChecks out;
  if (op.is_dense()) {
    const Mat& m = op.dense().matrix();
    double most_negative = 0.0;
    double worst_row = 0.0;
    bool real = true;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      double row_sum = 0.0;
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (std::abs(m(i, j).imag()) > tol::real_report) real = false;
        most_negative = std::min(most_negative, m(i, j).real());
        row_sum += m(i, j).real();
      }
      worst_row = std::max(worst_row, std::abs(row_sum - 1.0));
    }
    out.max_negative = -most_negative;
    out.max_partition_defect = worst_row;
    out.positive = real && out.max_negative <= tol::markov;
    out.partition_of_unity = worst_row <= tol::markov;
    return out;
  }

  const FiniteRankOperator& f = op.finite_rank();
  const Mat& c = f.coeff_samples();
  bool real = true;
  double most_negative = 0.0;
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    for (Eigen::Index x = 0; x < c.cols(); ++x) {
      if (std::abs(c(k, x).imag()) > tol::real_report) real = false;
      most_negative = std::min(most_negative, c(k, x).real());
    }
  }
  out.max_negative = -most_negative;
  out.positive = real && out.max_negative <= tol::markov;

  out.max_partition_defect =
      (c.real().colwise().sum().array() - 1.0).abs().maxCoeff();
  out.partition_of_unity = out.max_partition_defect <= tol::markov;

  if (expect_linear_reproduction) {
    double worst = 0.0;
    for (Eigen::Index x = 0; x < c.cols(); ++x) {
      Complex acc{0.0, 0.0};
      for (Eigen::Index k = 0; k < c.rows(); ++k) acc += f.nodes()[k] * c(k, x);
      worst = std::max(worst, std::abs(acc - Complex{f.grid()[x], 0.0}));
    }
    out.max_linear_defect = worst;
    out.reproduces_linear = worst <= tol::markov;
  }

  const double left = std::abs(c(0, 0) - Complex{1.0, 0.0});
  const double right = std::abs(c(c.rows() - 1, c.cols() - 1) - Complex{1.0, 0.0});
  out.endpoint_interpolation = std::max(left, right) <= tol::markov;
  return out;
}

}  // namespace ergolim
