#include "ergolim/dense_operator.hpp"

#include <cmath>

#include "ergolim/errors.hpp"

namespace ergolim {

DenseOperator::DenseOperator(Mat matrix, bool markov)
    : matrix_(std::move(matrix)), markov_(markov) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw InvalidInput("dense operator must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
      const Complex z = matrix_(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidInput("dense operator has non-finite entries");
      }
    }
  }
  if (markov_) {
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
      double row_sum = 0.0;
      for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
        const Complex z = matrix_(i, j);
        if (std::abs(z.imag()) > tol::real_report) {
          throw InvalidInput("markov operator entries must be real");
        }
        if (z.real() < -tol::markov) {
          throw InvalidInput("markov operator entries must be nonnegative");
        }
        row_sum += z.real();
      }
      if (std::abs(row_sum - 1.0) > tol::markov) {
        throw InvalidInput("markov operator row sums must equal 1");
      }
    }
  }
}

bool DenseOperator::is_effectively_real() const {
  return matrix_.imag().cwiseAbs().maxCoeff() <= tol::real_report;
}

DenseOperator DenseOperator::identity(int n) {
  return DenseOperator(Mat::Identity(n, n), false);
}

}  // namespace ergolim
