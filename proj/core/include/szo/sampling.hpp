#pragma once

#include <cstddef>

#include "szo/core.hpp"
#include "szo/rng.hpp"

namespace szo {

/// A point on the unit sphere S_{d-1}.
class SphereSample {
 public:
  /// Wraps an externally supplied direction; its norm must be 1 within 1e-12.
  static SphereSample from_unit(DenseVector u);

  const DenseVector& u() const noexcept { return u_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(u_.size()); }

 private:
  explicit SphereSample(DenseVector u) : u_(std::move(u)) {}
  friend SphereSample sample_sphere(RngStream& rng, std::size_t d);

  DenseVector u_;
};

/// Uniform direction on S_{d-1}: a standard Gaussian vector, normalized.
SphereSample sample_sphere(RngStream& rng, std::size_t d);

/// Uniform point in the closed unit ball: sphere direction times U^{1/d}.
DenseVector sample_ball(RngStream& rng, std::size_t d);

/// (d/r) f(x + r u) u. Consumes exactly one oracle query.
DenseVector single_point_estimate(ObjectiveOracle& oracle, const DenseVector& x, double r,
                                  const SphereSample& u);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct VectorEstimate {
  DenseVector mean;
  DenseVector std_error;  // componentwise standard error of the mean
};

/// Monte-Carlo estimate of f_r(x) = E_{y ~ Unif(B_d)} f(x + r y); n queries.
MeanEstimate estimate_smoothed_value(ObjectiveOracle& oracle, const DenseVector& x, double r,
                                     std::size_t n, RngStream& rng);

/// Mean of n single-point estimates, an unbiased estimate of grad f_r(x); n queries.
VectorEstimate estimate_smoothed_gradient(ObjectiveOracle& oracle, const DenseVector& x, double r,
                                          std::size_t n, RngStream& rng);

}  // namespace szo
