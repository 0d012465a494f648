#include "ergolim/functional.hpp"

#include <algorithm>
#include <cmath>

#include "ergolim/errors.hpp"

namespace ergolim {

namespace {

void require_finite(const Vec& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
      throw InvalidInput(std::string(what) + ": non-finite entry");
    }
  }
}

}  // namespace

Functional Functional::coordinate(Vec coefficients) {
  require_finite(coefficients, "coordinate functional");
  return Functional(Kind::coordinate, std::move(coefficients), RealVec());
}

Functional Functional::point_evaluation(double node, Complex weight) {
  RealVec nodes(1);
  nodes[0] = node;
  Vec weights(1);
  weights[0] = weight;
  return point_combination(std::move(nodes), std::move(weights));
}

Functional Functional::point_combination(RealVec nodes, Vec weights) {
  if (nodes.size() != weights.size()) {
    throw DimensionMismatch("point combination: nodes/weights length mismatch");
  }
  for (Eigen::Index i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] >= 0.0 && nodes[i] <= 1.0)) {
      throw InvalidInput("point evaluation node outside [0,1]");
    }
    if (i + 1 < nodes.size() && !(nodes[i] < nodes[i + 1])) {
      throw InvalidInput("point evaluation nodes must be strictly increasing");
    }
  }
  require_finite(weights, "point combination");
  return Functional(Kind::point_evaluation, std::move(weights), std::move(nodes));
}

const Vec& Functional::coefficients() const {
  if (kind_ != Kind::coordinate) {
    throw FunctionalNotRepresentable("coefficients() on a point-evaluation functional");
  }
  return coefficients_;
}

const RealVec& Functional::nodes() const {
  if (kind_ != Kind::point_evaluation) {
    throw FunctionalNotRepresentable("nodes() on a coordinate functional");
  }
  return nodes_;
}

const Vec& Functional::weights() const {
  if (kind_ != Kind::point_evaluation) {
    throw FunctionalNotRepresentable("weights() on a coordinate functional");
  }
  return coefficients_;
}

Complex Functional::operator()(const Vec& v) const {
  if (kind_ != Kind::coordinate) {
    throw FunctionalNotRepresentable(
        "point-evaluation functional applied to a coordinate vector");
  }
  if (coefficients_.size() != v.size()) {
    throw DimensionMismatch("functional/vector dimension mismatch");
  }
  // Bilinear pairing, no conjugation: f(v) = sum_i c_i v_i.
  return coefficients_.transpose() * v;
}

double Functional::dual_norm() const { return coefficients_.lpNorm<1>(); }

Functional Functional::normalized() const {
  const double norm = dual_norm();
  if (norm == 0.0) {
    throw InvalidInput("cannot normalize the zero functional");
  }
  Eigen::Index imax = 0;
  coefficients_.cwiseAbs().maxCoeff(&imax);
  const Complex pivot = coefficients_[imax];
  // Scale so the largest entry is real positive, then set dual norm to 1.
  const Complex phase = pivot / std::abs(pivot);
  Vec scaled = coefficients_ / (phase * norm);
  return Functional(kind_, std::move(scaled), nodes_);
}

bool Functional::is_zero(double eps) const {
  return coefficients_.size() == 0 || coefficients_.cwiseAbs().maxCoeff() <= eps;
}

double Functional::distance(const Functional& a, const Functional& b) {
  if (a.kind_ != b.kind_) {
    throw InvalidInput("functional distance across kinds");
  }
  if (a.kind_ == Kind::point_evaluation) {
    if (a.nodes_.size() != b.nodes_.size() ||
        (a.nodes_.size() > 0 && (a.nodes_ - b.nodes_).cwiseAbs().maxCoeff() > tol::node_snap)) {
      throw InvalidInput("functional distance across different node supports");
    }
  }
  if (a.coefficients_.size() != b.coefficients_.size()) {
    throw DimensionMismatch("functional distance: coefficient length mismatch");
  }
  return (a.coefficients_ - b.coefficients_).lpNorm<1>();
}

int grid_index(const RealVec& grid, double t, double eps) {
  const auto* begin = grid.data();
  const auto* end = grid.data() + grid.size();
  const auto* it = std::lower_bound(begin, end, t - eps);
  if (it != end && std::abs(*it - t) <= eps) {
    return static_cast<int>(it - begin);
  }
  return -1;
}

Complex evaluate_on_grid(const Functional& f, const Vec& samples, const RealVec& grid) {
  if (samples.size() != grid.size()) {
    throw DimensionMismatch("samples/grid length mismatch");
  }
  if (f.kind() == Functional::Kind::coordinate) {
    return f(samples);
  }
  Complex acc{0.0, 0.0};
  const RealVec& nodes = f.nodes();
  const Vec& weights = f.weights();
  for (Eigen::Index j = 0; j < nodes.size(); ++j) {
    const int idx = grid_index(grid, nodes[j]);
    if (idx < 0) {
      throw FunctionalNotRepresentable("evaluation node is not a grid point");
    }
    acc += weights[j] * samples[idx];
  }
  return acc;
}

}  // namespace ergolim
