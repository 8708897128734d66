#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "szo/core.hpp"
#include "szo/optimizers.hpp"

namespace szo {

using ScalarFunction = std::function<double(double)>;

/// Sinusoidal extremum-seeking loop: probe a sin(wt), demodulate by (2/a) sin(wt),
/// optional high-pass s/(s + w_H) and low-pass w_L/(s + w_L), integrator -1/s.
struct EsParams {
  double a = 0.1;
  double omega = 100.0;
  double omega_H = 0.0;
  double omega_L = 1.0;
  bool use_filters = false;

  void validate() const;
};

struct EsState {
  double x = 0.0;
  double xi = 0.0;  // high-pass internal state
  double y = 0.0;   // low-pass output
  double t = 0.0;
};

struct EsDerivative {
  double dx = 0.0;
  double dxi = 0.0;
  double dy = 0.0;
};

/// Vector field of the loop. Without filters: dx = -(2/a) f(x + a sin wt) sin wt.
/// With filters, v = f(x + a sin wt) drives dxi = -w_H xi + v, the high-pass
/// output is z = v - w_H xi, g = (2/a) z sin wt, dy = w_L(g - y), dx = -y.
EsDerivative es_rhs(const EsState& state, const EsParams& params, const ScalarFunction& f);

/// High-pass output z at the given state (equals v when filters are off).
double es_high_pass_output(const EsState& state, const EsParams& params, const ScalarFunction& f);

struct EsTrajectory {
  std::vector<EsState> states;
  bool diverged = false;
};

/// Classical RK4 from t = 0 to `horizon`. dt must resolve the probe with at
/// least 20 steps per period. Every `sample_every`-th state plus the final one
/// is kept. Integration stops early when |x| exceeds `divergence_bound`.
EsTrajectory integrate_es(double x0, const EsParams& params, const ScalarFunction& f, double horizon,
                          double dt, std::size_t sample_every = 1, double divergence_bound = 1e12);

/// Period average of the unfiltered vector field's negated right-hand side,
/// h_ave(x) = (1/T) int_0^T (2/a) f(x + a sin wt) sin wt dt, by composite
/// Gauss-Legendre quadrature (panels x nodes_per_panel nodes per period).
double average_dynamics(const ScalarFunction& f, double x, double a, double omega, int panels = 64,
                        int nodes_per_panel = 16);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct BridgeReport {
  SzoHyperparams mapped;
  std::int64_t steps = 0;
  /// max_k ||x_filter,k - x_hlf,k||_inf / max(||x_hlf,k||_inf, 1)
  double max_relative_deviation = 0.0;
  bool diverged = false;
};

/// Runs the filter form and HLF-SZO with the mapped parameters on one shared
/// direction sequence and reports how far the two iterate sequences drift apart.
BridgeReport discretization_bridge(const FilterParams& fp, std::shared_ptr<const Objective> objective,
                                   const DenseVector& x0, std::int64_t steps, std::uint64_t seed);

/// Writes `method,trial,t,f_value,gap,queries` rows; queries is always 0 for the
/// continuous-time loop.
void write_es_trajectory_csv(std::ostream& os, const EsTrajectory& traj, const ScalarFunction& f, double f_star,
                             bool header = true);

}  // namespace szo
