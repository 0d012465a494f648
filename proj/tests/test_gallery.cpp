#include <doctest.h>

#include "ergolim/errors.hpp"
#include "ergolim/gallery.hpp"
#include "ergolim/gram.hpp"
#include "ergolim/iteration.hpp"
#include "ergolim/spectral.hpp"
#include "test_support.hpp"

using namespace ergolim;
using namespace ergolim::testing;

TEST_CASE("intro_hat: partition of unity with fixed space span(1, x)") {
  const GalleryEntry entry = make(GallerySpec::intro_hat(101));
  const MarkovChecks checks = verify_markov(entry.op);
  CHECK(checks.positive);
  CHECK(checks.partition_of_unity);
  CHECK(checks.reproduces_linear.value());
  CHECK(checks.endpoint_interpolation.value());
  CHECK(checks.passed());

  Mat expected(3, 3);
  expected << 1.0, 0.0, 0.0, 0.25, 0.5, 0.25, 0.0, 0.0, 1.0;
  CHECK(inf_norm(entry.op.finite_rank().node_matrix() - expected) <= 1e-14);

  CHECK_NOTHROW(validate(*entry.known_eigensystem));
  CHECK(entry.limit_description == "f -> f(0) + (f(1) - f(0)) x");
}

TEST_CASE("bernstein(1): the operator is already the endpoint interpolation") {
  const GalleryEntry entry = make(GallerySpec::bernstein(1, 101));
  REQUIRE(entry.known_limit.has_value());
  CHECK(deviation(entry.op, *entry.known_limit) <= 1e-12);

  const ProjectionOperator p = build_projection(*entry.known_eigensystem);
  const ConvergenceReport r = iterate_deviation(entry.op, p, 10, 1e-12);
  CHECK(r.verdict == Verdict::converged);
  CHECK(r.entries.size() == 1);
}

TEST_CASE("bernstein: markov checks including the binomial linear identity") {
  const GalleryEntry entry = make(GallerySpec::bernstein(3, 100));
  const MarkovChecks checks = verify_markov(entry.op);
  CHECK(checks.passed());
  CHECK(checks.max_linear_defect <= 1e-12);

  const RealVec& nodes = entry.op.finite_rank().nodes();
  REQUIRE(nodes.size() == 4);
  for (int k = 0; k <= 3; ++k) {
    CHECK(std::abs(nodes[k] - k / 3.0) <= 1e-12);
  }
}

TEST_CASE("bernstein: node-matrix subdominant eigenvalue equals (n-1)/n") {
  for (int n : {2, 3, 5}) {
    const GalleryEntry entry = make(GallerySpec::bernstein(n));
    const SpectrumReport r =
        spectrum(DenseOperator(entry.op.finite_rank().node_matrix()));
    double subdominant = 0.0;
    for (const Complex& z : r.eigenvalues) {
      const double mag = std::abs(z);
      if (mag < 1.0 - 1e-9) subdominant = std::max(subdominant, mag);
    }
    CHECK(std::abs(subdominant - static_cast<double>(n - 1) / n) <= 1e-10);
  }
}

TEST_CASE("schoenberg: B-spline partition of unity with Greville linear reproduction") {
  const GalleryEntry entry = make(GallerySpec::schoenberg(2, 4));
  const MarkovChecks checks = verify_markov(entry.op);
  CHECK(checks.positive);
  CHECK(checks.partition_of_unity);
  CHECK(checks.reproduces_linear.value());
  CHECK(checks.endpoint_interpolation.value());
  REQUIRE(entry.known_eigensystem.has_value());

  // Greville abscissae of degree 2 on 4 spans: 0, 1/8, 3/8, 5/8, 7/8, 1.
  const RealVec& nodes = entry.op.finite_rank().nodes();
  REQUIRE(nodes.size() == 6);
  const double expected[] = {0.0, 0.125, 0.375, 0.625, 0.875, 1.0};
  for (int k = 0; k < 6; ++k) {
    CHECK(std::abs(nodes[k] - expected[k]) <= 1e-12);
  }

  // Strict contraction off the fixed space from degree 2 on.
  const SpectrumReport r =
      spectrum(DenseOperator(entry.op.finite_rank().node_matrix()));
  double subdominant = 0.0;
  for (const Complex& z : r.eigenvalues) {
    if (std::abs(z) < 1.0 - 1e-9) subdominant = std::max(subdominant, std::abs(z));
  }
  CHECK(subdominant < 1.0);
  CHECK(subdominant > 0.0);
}

TEST_CASE("schoenberg: degree 1 is nodal interpolation, no affine limit claimed") {
  const GalleryEntry entry = make(GallerySpec::schoenberg(1, 4));
  CHECK_FALSE(entry.known_eigensystem.has_value());
  CHECK_FALSE(entry.known_limit.has_value());
  // T^2 = T: hats interpolate at their own nodes.
  CHECK(deviation(compose(entry.op, entry.op), entry.op) <= 1e-14);
}

TEST_CASE("stochastic_random: primitive, reproducible, seed recorded") {
  const GalleryEntry a = make(GallerySpec::stochastic_random(5, 42));
  const GalleryEntry b = make(GallerySpec::stochastic_random(5, 42));
  CHECK(deviation(a.op, b.op) == 0.0);
  CHECK(a.seed_used == 42);

  const SpectrumReport r = spectrum(a.op.dense());
  REQUIRE(r.peripheral.size() == 1);
  CHECK(std::abs(r.peripheral[0] - Complex{1.0, 0.0}) <= 1e-9);
  REQUIRE(a.known_limit.has_value());
  // The recorded limit is the stationary rank-one projection.
  const ConvergenceReport conv = iterate_deviation(
      a.op, build_projection(*a.known_eigensystem), 500, 1e-11);
  CHECK(conv.verdict == Verdict::converged);
}

TEST_CASE("periodic_permutation: the 2-cycle is the swap matrix") {
  const GalleryEntry entry = make(GallerySpec::periodic_permutation(2));
  CHECK(inf_norm(entry.op.dense().matrix() - cycle_matrix(2)) == 0.0);
  CHECK_FALSE(entry.known_limit.has_value());

  const GalleryEntry trivial = make(GallerySpec::periodic_permutation(1));
  REQUIRE(trivial.known_limit.has_value());
}

TEST_CASE("mixed_chain: convex combination sharing the stationary pair") {
  const GalleryEntry entry = make(GallerySpec::mixed_chain(0.5));
  Mat expected = 0.5 * two_state_chain() + 0.5 * two_state_limit();
  CHECK(inf_norm(entry.op.dense().matrix() - expected) <= 1e-15);

  const GalleryEntry plain = make(GallerySpec::mixed_chain(1.0));
  CHECK(inf_norm(plain.op.dense().matrix() - two_state_chain()) == 0.0);

  CHECK_THROWS_AS(make(GallerySpec::mixed_chain(0.0)), InvalidInput);
  CHECK_THROWS_AS(make(GallerySpec::mixed_chain(1.5)), InvalidInput);
}

TEST_CASE("verify_markov: perturbed partition of unity fails the check") {
  const GalleryEntry entry = make(GallerySpec::intro_hat(101));
  const FiniteRankOperator& t = entry.op.finite_rank();
  Mat perturbed = t.coeff_samples();
  perturbed.row(0).array() += 0.01;
  const FiniteRankOperator broken(t.nodes(), t.grid(), std::move(perturbed));
  const MarkovChecks checks = verify_markov(OperatorHandle(broken));
  CHECK_FALSE(checks.partition_of_unity);
  CHECK(checks.max_partition_defect == doctest::Approx(0.01).epsilon(1e-6));
  CHECK_FALSE(checks.passed());
}

TEST_CASE("gallery invariant: markov members have norm 1 and unit-disk spectra") {
  std::vector<GalleryEntry> entries;
  entries.push_back(make(GallerySpec::intro_hat(101)));
  entries.push_back(make(GallerySpec::bernstein(4, 101)));
  entries.push_back(make(GallerySpec::schoenberg(2, 5, 101)));
  entries.push_back(make(GallerySpec::stochastic_random(6, 7)));
  entries.push_back(make(GallerySpec::periodic_permutation(4)));
  entries.push_back(make(GallerySpec::mixed_chain(0.3)));

  for (const GalleryEntry& entry : entries) {
    CHECK(entry.op.markov());
    CHECK(std::abs(operator_norm(entry.op) - 1.0) <= 1e-12);
    const Mat& probe = entry.op.is_dense() ? entry.op.dense().matrix()
                                           : entry.op.finite_rank().node_matrix();
    const SpectrumReport r = spectrum(DenseOperator(probe));
    CHECK(r.spectral_radius <= 1.0 + 1e-12);
  }
}

TEST_CASE("gallery invariant: intro and Bernstein share the interpolation limit") {
  // Common grid so the realized limits are directly comparable.
  const GalleryEntry intro = make(GallerySpec::intro_hat(61));
  const GalleryEntry b2 = make(GallerySpec::bernstein(2, 61));
  CHECK(deviation(*intro.known_limit, *b2.known_limit) <= 1e-14);

  const ProjectionOperator p_intro = build_projection(*intro.known_eigensystem);
  const ConvergenceReport r = iterate_deviation(b2.op, p_intro, 10000, 1e-10);
  CHECK(r.verdict == Verdict::converged);
}

TEST_CASE("gallery: parameter validation") {
  CHECK_THROWS_AS(make(GallerySpec::bernstein(0)), InvalidInput);
  CHECK_THROWS_AS(make(GallerySpec::schoenberg(0, 4)), InvalidInput);
  CHECK_THROWS_AS(make(GallerySpec::stochastic_random(1, 5)), InvalidInput);
  // Grid too coarse to host the nodes k/3.
  CHECK_THROWS_AS(make(GallerySpec::bernstein(3, 101)), InvalidInput);
}
