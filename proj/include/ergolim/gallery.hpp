#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ergolim/gram.hpp"
#include "ergolim/operator_handle.hpp"
#include "ergolim/types.hpp"

namespace ergolim {

/**
 * Constructors for the example operators used throughout: partition-of-unity
 * operators on [0,1] with known fixed-point data, and small stochastic
 * matrix families.
 *
 * grid_points = 0 picks the default resolution (about 1001 uniform points,
 * adjusted so every node lands exactly on a grid point).
 */
struct GallerySpec {
  enum class Kind {
    intro_hat,             // flattened piecewise-linear hats on {0, 1/2, 1}
    bernstein,             // nodes k/n, Bernstein basis polynomials
    schoenberg,            // degree-d B-splines, Greville nodes
    stochastic_random,     // seeded positive row-stochastic matrix
    periodic_permutation,  // n-cycle permutation matrix
    mixed_chain,           // alpha*T0 + (1-alpha)*P0 for the two-state chain
  };

  Kind kind = Kind::intro_hat;
  int n = 0;                 // bernstein degree / matrix dimension / cycle length
  int degree = 0;            // schoenberg spline degree
  int segments = 0;          // schoenberg knot spans (open uniform knots)
  std::uint64_t seed = 0;    // stochastic_random
  double alpha = 1.0;        // mixed_chain, in (0, 1]
  int grid_points = 0;       // 0 = auto

  static GallerySpec intro_hat(int grid_points = 0);
  static GallerySpec bernstein(int n, int grid_points = 0);
  static GallerySpec schoenberg(int degree, int segments, int grid_points = 0);
  static GallerySpec stochastic_random(int n, std::uint64_t seed);
  static GallerySpec periodic_permutation(int n);
  static GallerySpec mixed_chain(double alpha);
};

struct GalleryEntry {
  OperatorHandle op;
  std::optional<EigenSystemInput> known_eigensystem;
  std::optional<OperatorHandle> known_limit;
  std::string limit_description;
  std::uint64_t seed_used = 0;  // stochastic_random only (after regeneration)
};

GalleryEntry make(const GallerySpec& spec);

/**
 * Markov-property checks: positivity, partition of unity / row sums, linear
 * reproduction sum_k t_k p_k(t) = t where claimed, and endpoint interpolation
 * p_1(0) = p_n(1) = 1. Fields inapplicable to a backend stay nullopt.
 */
struct MarkovChecks {
  bool positive = false;
  bool partition_of_unity = false;
  std::optional<bool> reproduces_linear;
  std::optional<bool> endpoint_interpolation;
  double max_negative = 0.0;
  double max_partition_defect = 0.0;
  double max_linear_defect = 0.0;

  bool passed() const {
    return positive && partition_of_unity && reproduces_linear.value_or(true) &&
           endpoint_interpolation.value_or(true);
  }
};

MarkovChecks verify_markov(const OperatorHandle& op, bool expect_linear_reproduction = true);

const char* to_string(GallerySpec::Kind kind);

}  // namespace ergolim
