#pragma once

#include <complex>

#include <Eigen/Core>

namespace ergolim {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

namespace tol {

// Row sums / partition of unity; sized for rounding accumulated over ~1e3 composes.
inline constexpr double markov = 1e-12;

// Singular values below rank_rel * sigma_max count as zero.
inline constexpr double rank_rel = 1e-9;

// Gram systems with condition estimates beyond this are treated as singular.
inline constexpr double condition_limit = 1e12;

// Imaginary parts at or below this are reported as real.
inline constexpr double real_report = 1e-13;

// A node must sit this close to a grid point; it is then snapped onto it.
inline constexpr double node_snap = 1e-9;

}  // namespace tol

}  // namespace ergolim
