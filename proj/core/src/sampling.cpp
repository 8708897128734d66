#include "szo/sampling.hpp"

#include <cmath>

namespace szo {

namespace {

void require_positive_dim(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::invalid_argument, "dimension must be at least 1");
}

void require_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::invalid_argument, "smoothing radius must be positive, got " + std::to_string(r));
  }
}

void require_samples(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "need at least 2 samples");
}

}  // namespace

SphereSample SphereSample::from_unit(DenseVector u) {
  require_finite(u, "direction");
  if (u.size() == 0) throw Error(ErrorKind::invalid_argument, "empty direction");
  if (std::abs(u.norm() - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_argument, "direction is not unit norm: " + format_vector(u));
  }
  return SphereSample(std::move(u));
}

SphereSample sample_sphere(RngStream& rng, std::size_t d) {
  require_positive_dim(d);
  DenseVector g(static_cast<Eigen::Index>(d));
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = rng.normal();
    norm = g.norm();
  } while (norm == 0.0);
  return SphereSample(g / norm);
}

DenseVector sample_ball(RngStream& rng, std::size_t d) {
  SphereSample dir = sample_sphere(rng, d);
  const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return radius * dir.u();
}

DenseVector single_point_estimate(ObjectiveOracle& oracle, const DenseVector& x, double r,
                                  const SphereSample& u) {
  require_radius(r);
  require_dim(x, oracle.dim(), "x");
  require_dim(u.u(), oracle.dim(), "direction");
  const double d = static_cast<double>(oracle.dim());
  const double f = oracle.eval(x + r * u.u());
  return (d / r * f) * u.u();
}

MeanEstimate estimate_smoothed_value(ObjectiveOracle& oracle, const DenseVector& x, double r,
                                     std::size_t n, RngStream& rng) {
  require_radius(r);
  require_samples(n);
  require_dim(x, oracle.dim(), "x");
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = oracle.eval(x + r * sample_ball(rng, oracle.dim()));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

VectorEstimate estimate_smoothed_gradient(ObjectiveOracle& oracle, const DenseVector& x, double r,
                                          std::size_t n, RngStream& rng) {
  require_radius(r);
  require_samples(n);
  require_dim(x, oracle.dim(), "x");
  const auto d = static_cast<Eigen::Index>(oracle.dim());
  DenseVector mean = DenseVector::Zero(d);
  DenseVector m2 = DenseVector::Zero(d);
  for (std::size_t i = 0; i < n; ++i) {
    const DenseVector g = single_point_estimate(oracle, x, r, sample_sphere(rng, oracle.dim()));
    const DenseVector delta = g - mean;
    mean += delta / static_cast<double>(i + 1);
    m2.array() += delta.array() * (g - mean).array();
  }
  DenseVector std_error = (m2 / static_cast<double>(n - 1) / static_cast<double>(n)).cwiseSqrt();
  return {std::move(mean), std::move(std_error)};
}

}  // namespace szo
