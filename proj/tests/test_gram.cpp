#include <doctest.h>

#include <random>

#include "ergolim/errors.hpp"
#include "ergolim/gallery.hpp"
#include "ergolim/gram.hpp"
#include "test_support.hpp"

using namespace ergolim;
using namespace ergolim::testing;

namespace {

EigenSystemInput jordan_p1_system() {
  // ker(T - I) = span{(1,0)}, ker((T - I)^T) = span{(0,1)} for [[1,1],[0,1]].
  EigenSystemInput sys;
  sys.lambda = Complex{1.0, 0.0};
  Vec e(2);
  e << 1, 0;
  Vec c(2);
  c << 0, 1;
  sys.basis = {std::move(e)};
  sys.dual_basis = {Functional::coordinate(std::move(c))};
  return sys;
}

EigenSystemInput chain_system() {
  EigenSystemInput sys;
  sys.lambda = Complex{1.0, 0.0};
  sys.basis = {Vec::Ones(2)};
  Vec pi(2);
  pi << 2.0 / 3.0, 1.0 / 3.0;
  sys.dual_basis = {Functional::coordinate(std::move(pi))};
  return sys;
}

}  // namespace

TEST_CASE("build_gram: the introductory system gives G = [[1,0],[1,1]]") {
  const GalleryEntry entry = make(GallerySpec::intro_hat(101));
  const GramSystem g = build_gram(*entry.known_eigensystem);
  CHECK(g.mode == GramSystem::Mode::inverse);
  CHECK(std::abs(g.G(0, 0) - Complex{1.0, 0.0}) <= 1e-14);
  CHECK(std::abs(g.G(0, 1)) <= 1e-14);
  CHECK(std::abs(g.G(1, 0) - Complex{1.0, 0.0}) <= 1e-14);
  CHECK(std::abs(g.G(1, 1) - Complex{1.0, 0.0}) <= 1e-14);

  CHECK(std::abs(g.A(0, 0) - Complex{1.0, 0.0}) <= 1e-14);
  CHECK(std::abs(g.A(0, 1)) <= 1e-14);
  CHECK(std::abs(g.A(1, 0) - Complex{-1.0, 0.0}) <= 1e-14);
  CHECK(std::abs(g.A(1, 1) - Complex{1.0, 0.0}) <= 1e-14);
}

TEST_CASE("build_gram: stationary pairing of the chain is the 1x1 identity") {
  const GramSystem g = build_gram(chain_system());
  CHECK(g.mode == GramSystem::Mode::inverse);
  CHECK(std::abs(g.G(0, 0) - Complex{1.0, 0.0}) <= 1e-15);
  CHECK(std::abs(g.A(0, 0) - Complex{1.0, 0.0}) <= 1e-15);
}

TEST_CASE("build_gram: ascent-two Jordan block yields a singular Gram matrix") {
  const GramSystem g = build_gram(jordan_p1_system());
  CHECK(g.mode == GramSystem::Mode::singular);
  CHECK(g.column_rank == 0);
  CHECK(std::abs(g.G(0, 0)) <= 1e-15);
  CHECK_THROWS_AS(solve_coefficients(g), GramSingular);
}

TEST_CASE("build_gram: empty basis is rejected") {
  EigenSystemInput sys;
  CHECK_THROWS_AS(build_gram(sys), InvalidInput);
}

TEST_CASE("solve_coefficients: Moore-Penrose branch for a tall G") {
  // Duplicated functional: G = [[1],[1]], A = (G^H G)^{-1} G^H = [0.5, 0.5].
  EigenSystemInput sys;
  Vec e(2);
  e << 1, 0;
  Vec c(2);
  c << 1, 0;
  sys.basis = {e};
  sys.dual_basis = {Functional::coordinate(c), Functional::coordinate(c)};
  const GramSystem g = build_gram(sys);
  CHECK(g.mode == GramSystem::Mode::moore_penrose);
  CHECK(std::abs(g.A(0, 0) - Complex{0.5, 0.0}) <= 1e-14);
  CHECK(std::abs(g.A(0, 1) - Complex{0.5, 0.0}) <= 1e-14);
  CHECK(g.solve_residual <= 1e-12);
}

TEST_CASE("solve_coefficients: identity Gram matrix returns the identity") {
  EigenSystemInput sys;
  Vec e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  sys.basis = {e1, e2};
  sys.dual_basis = {Functional::coordinate(e1), Functional::coordinate(e2)};
  const GramSystem g = build_gram(sys);
  const Mat a = solve_coefficients(g);
  CHECK(inf_norm(a - Mat::Identity(2, 2)) <= 1e-14);
}

TEST_CASE("build_projection: introductory system realizes endpoint interpolation") {
  const GalleryEntry entry = make(GallerySpec::intro_hat(101));
  const ProjectionOperator p = build_projection(*entry.known_eigensystem);
  CHECK(p.idempotency_residual <= 1e-10);
  CHECK(p.basis_residual <= 1e-10);
  CHECK(p.realized_rank == 2);

  const RealVec& grid = entry.op.finite_rank().grid();
  Vec f(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    f[i] = 0.3 - 1.2 * x + 0.7 * x * x * x;
  }
  const Vec pf = ergolim::apply(p.realized, f);
  const Complex f0 = f[0], f1 = f[grid.size() - 1];
  double worst = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(pf[i] - (f0 + (f1 - f0) * grid[i])));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("build_projection: two-state chain gives the rank-one stationary projection") {
  const ProjectionOperator p = build_projection(chain_system());
  CHECK(deviation(p.realized, OperatorHandle(DenseOperator(two_state_limit()))) <= 1e-14);
}

TEST_CASE("build_projection: full coordinate system realizes the identity") {
  EigenSystemInput sys;
  for (int i = 0; i < 3; ++i) {
    Vec e = Vec::Zero(3);
    e[i] = 1;
    sys.basis.push_back(e);
    sys.dual_basis.push_back(Functional::coordinate(e));
  }
  const ProjectionOperator p = build_projection(sys);
  CHECK(deviation(p.realized, OperatorHandle(DenseOperator::identity(3))) <= 1e-14);
}

TEST_CASE("separation_check: witness vanishes on the basis when separation fails") {
  const GalleryEntry entry = make(GallerySpec::intro_hat(101));
  CHECK(separation_check(*entry.known_eigensystem).separated);

  const SeparationResult jordan = separation_check(jordan_p1_system());
  CHECK_FALSE(jordan.separated);
  REQUIRE(jordan.witness.has_value());
  CHECK(std::abs((*jordan.witness)[0] - Complex{1.0, 0.0}) <= 1e-14);

  // Duplicated dual functional: rows of G coincide.
  EigenSystemInput dup;
  Vec e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  Vec c(2);
  c << 0.5, 0.5;
  dup.basis = {e1, e2};
  dup.dual_basis = {Functional::coordinate(c), Functional::coordinate(c)};
  const SeparationResult r = separation_check(dup);
  CHECK_FALSE(r.separated);
  REQUIRE(r.witness.has_value());
  // witness c with G^T c = 0: here c = (1, -1)/scale
  const Vec& w = *r.witness;
  CHECK(std::abs(w[0] + w[1]) <= 1e-10);

  EigenSystemInput tall;
  tall.basis = {e1};
  tall.dual_basis = {Functional::coordinate(e1), Functional::coordinate(e2)};
  CHECK_THROWS_AS(separation_check(tall), DimensionMismatch);
}

TEST_CASE("ascent_diagnostic: chain, Jordan block, and resolvent point") {
  const OperatorHandle chain(DenseOperator(two_state_chain(), true));
  const AscentDiagnostic a1 = ascent_diagnostic(chain, Complex{1.0, 0.0});
  CHECK(a1.dim_ker_1 == 1);
  CHECK(a1.dim_ker_2 == 1);
  CHECK(a1.ascent_le_one);

  const OperatorHandle jordan{DenseOperator(jordan_block_2())};
  const AscentDiagnostic a2 = ascent_diagnostic(jordan, Complex{1.0, 0.0});
  CHECK(a2.dim_ker_1 == 1);
  CHECK(a2.dim_ker_2 == 2);
  CHECK_FALSE(a2.ascent_le_one);

  const AscentDiagnostic a3 = ascent_diagnostic(chain, Complex{5.0, 0.0});
  CHECK(a3.dim_ker_1 == 0);
  CHECK(a3.dim_ker_2 == 0);
  CHECK(a3.ascent_le_one);
}

TEST_CASE("fixed_point_spaces: chain, identity, permutation") {
  const OperatorHandle chain(DenseOperator(two_state_chain(), true));
  const EigenSystemInput sys = fixed_point_spaces(chain, Complex{1.0, 0.0});
  REQUIRE(sys.n() == 1);
  REQUIRE(sys.m() == 1);
  CHECK((sys.basis[0] - Vec::Ones(2)).cwiseAbs().maxCoeff() <= 1e-12);
  Vec pi(2);
  pi << 2.0 / 3.0, 1.0 / 3.0;
  CHECK((sys.dual_basis[0].coefficients() - pi).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_NOTHROW(validate(sys));

  const OperatorHandle id3(DenseOperator::identity(3));
  const EigenSystemInput full = fixed_point_spaces(id3, Complex{1.0, 0.0});
  CHECK(full.n() == 3);
  CHECK(full.m() == 3);

  const OperatorHandle swap(DenseOperator(cycle_matrix(2), true));
  const EigenSystemInput alternating = fixed_point_spaces(swap, Complex{-1.0, 0.0});
  REQUIRE(alternating.n() == 1);
  Vec expected(2);
  expected << 1, -1;
  CHECK((alternating.basis[0] - expected).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(fixed_point_spaces(id3, Complex{0.5, 0.0}), EmptyEigenspace);
}

TEST_CASE("generalized kernels: ascent-two system projects onto the whole plane") {
  const OperatorHandle jordan{DenseOperator(jordan_block_2())};
  const EigenSystemInput sys = generalized_kernel_system(jordan, Complex{1.0, 0.0}, 2);
  CHECK(sys.n() == 2);
  CHECK(sys.m() == 2);
  const ProjectionOperator p = build_projection(sys);
  CHECK(deviation(p.realized, OperatorHandle(DenseOperator::identity(2))) <= 1e-10);
}

TEST_CASE("validate: unnormalized systems are rejected") {
  EigenSystemInput sys = chain_system();
  sys.basis[0] *= 2.0;
  CHECK_THROWS_AS(validate(sys), InvalidInput);

  EigenSystemInput sys2 = chain_system();
  sys2.dual_basis[0] = Functional::coordinate(Vec::Ones(2));  // l1 norm 2
  CHECK_THROWS_AS(validate(sys2), InvalidInput);
}

TEST_CASE("property: Gram rank agrees with the ascent diagnostic (Jordan families)") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> dim_dist(2, 8);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const JordanCase jc = random_jordan_case(rng, dim_dist(rng));
    const OperatorHandle t(DenseOperator(jc.matrix));
    for (const auto& [lambda, ascent] : jc.eigenvalue_ascents) {
      const AscentDiagnostic diag = ascent_diagnostic(t, lambda);
      CHECK(diag.ascent_le_one == (ascent == 1));
      const EigenSystemInput sys = fixed_point_spaces(t, lambda);
      const SeparationResult sep = separation_check(sys);
      CHECK(sep.separated == (ascent == 1));
      CHECK(sep.separated == (build_gram(sys).mode == GramSystem::Mode::inverse));
      ++checked;
    }
  }
  CHECK(checked > 60);
}

TEST_CASE("property: projection identities on reconstructed systems") {
  std::mt19937_64 rng(515);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const OperatorHandle t(random_markov(rng, n));
    const EigenSystemInput sys = fixed_point_spaces(t, Complex{1.0, 0.0});
    const ProjectionOperator p = build_projection(sys);
    CHECK(p.idempotency_residual <= 1e-10);
    CHECK(p.basis_residual <= 1e-10);

    // e*_j(Px) = e*_j(x) for the square case: rows of A G reproduce.
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = Complex{entry(rng), entry(rng)};
    const Vec px = ergolim::apply(p.realized, x);
    for (const Functional& f : sys.dual_basis) {
      CHECK(std::abs(f(px) - f(x)) <= 1e-10);
    }
  }
}

TEST_CASE("property: space decomposition v = Pv + (I-P)v with (I-P)v in the range") {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const DenseOperator t = random_markov(rng, n);
    const EigenSystemInput sys = fixed_point_spaces(OperatorHandle(t), Complex{1.0, 0.0});
    const ProjectionOperator p = build_projection(sys);

    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex{entry(rng), entry(rng)};
    const Vec pv = ergolim::apply(p.realized, v);
    const Vec rest = v - pv;

    // Pv lies in span(e_i): least-squares residual against the basis.
    Mat basis_cols(n, sys.n());
    for (int i = 0; i < sys.n(); ++i) basis_cols.col(i) = sys.basis[static_cast<size_t>(i)];
    const Vec coeffs = basis_cols.colPivHouseholderQr().solve(pv);
    CHECK((basis_cols * coeffs - pv).norm() <= 1e-8);

    // (I - P)v lies in range(T - I).
    const Mat shifted = t.matrix() - Mat::Identity(n, n);
    const Vec pre = shifted.colPivHouseholderQr().solve(rest);
    CHECK((shifted * pre - rest).norm() <= 1e-8);
  }
}

TEST_CASE("property: commutation TP = PT = lambda P exactly for ascent one") {
  const OperatorHandle chain(DenseOperator(two_state_chain(), true));
  const ProjectionOperator p = build_projection(chain_system());
  const OperatorHandle tp = compose(chain, p.realized);
  const OperatorHandle pt = compose(p.realized, chain);
  CHECK(deviation(tp, p.realized) <= 1e-10);  // lambda = 1
  CHECK(deviation(pt, p.realized) <= 1e-10);

  // Ascent two: the generalized projection commutes but TP != lambda P.
  const OperatorHandle jordan{DenseOperator(jordan_block_2())};
  const EigenSystemInput gen = generalized_kernel_system(jordan, Complex{1.0, 0.0}, 2);
  const ProjectionOperator pj = build_projection(gen);
  const double off = deviation(compose(jordan, pj.realized), pj.realized);
  CHECK(off > 0.5);  // ||T - I|| = 1 for the Jordan block
}

TEST_CASE("property: realized norm respects the coefficient bound") {
  const GalleryEntry intro = make(GallerySpec::intro_hat(101));
  const ProjectionOperator p1 = build_projection(*intro.known_eigensystem);
  CHECK(operator_norm(p1.realized) <= p1.coefficient_bound + 1e-10);

  const ProjectionOperator p2 = build_projection(chain_system());
  CHECK(operator_norm(p2.realized) <= p2.coefficient_bound + 1e-10);

  std::mt19937_64 rng(9001);
  for (int trial = 0; trial < 6; ++trial) {
    const OperatorHandle t(random_markov(rng, 4 + static_cast<int>(rng() % 3)));
    const ProjectionOperator p =
        build_projection(fixed_point_spaces(t, Complex{1.0, 0.0}));
    CHECK(operator_norm(p.realized) <= p.coefficient_bound + 1e-10);
  }
}

TEST_CASE("property: the realized projection is normalization-invariant") {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> scale_dist(0.5, 2.0);
  std::uniform_real_distribution<double> angle(0.0, 6.28);

  const GalleryEntry intro = make(GallerySpec::intro_hat(101));
  for (const EigenSystemInput& base :
       {*intro.known_eigensystem, chain_system()}) {
    const ProjectionOperator reference = build_projection(base);
    EigenSystemInput scaled = base;
    for (Vec& e : scaled.basis) {
      e *= scale_dist(rng) * std::exp(Complex{0.0, angle(rng)});
    }
    for (Functional& f : scaled.dual_basis) {
      const Complex factor = scale_dist(rng) * std::exp(Complex{0.0, angle(rng)});
      if (f.kind() == Functional::Kind::coordinate) {
        f = Functional::coordinate(factor * f.coefficients());
      } else {
        f = Functional::point_combination(f.nodes(), factor * f.weights());
      }
    }
    const ProjectionOperator rescaled = build_projection(scaled);
    CHECK(deviation(reference.realized, rescaled.realized) <= 1e-10);
  }
}

TEST_CASE("GramSingular carries the observed column rank") {
  const GramSystem g = build_gram(jordan_p1_system());
  try {
    solve_coefficients(g);
    FAIL("expected GramSingular");
  } catch (const GramSingular& e) {
    CHECK(e.column_rank == 0);
  }
}
