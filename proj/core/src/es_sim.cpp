#include "szo/es_sim.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "szo/dataset_io.hpp"

namespace szo {

void EsParams::validate() const {
  if (!(a > 0.0) || !(omega > 0.0) || !(omega_L > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "ES needs a, omega, omega_L > 0");
  }
  if (!(omega_H >= 0.0)) throw Error(ErrorKind::invalid_argument, "omega_H must be non-negative");
}

double es_high_pass_output(const EsState& state, const EsParams& params, const ScalarFunction& f) {
  const double v = f(state.x + params.a * std::sin(params.omega * state.t));
  return params.use_filters ? v - params.omega_H * state.xi : v;
}

EsDerivative es_rhs(const EsState& state, const EsParams& params, const ScalarFunction& f) {
  const double probe = std::sin(params.omega * state.t);
  const double v = f(state.x + params.a * probe);
  EsDerivative out;
  if (!params.use_filters) {
    out.dx = -(2.0 / params.a) * v * probe;
    return out;
  }
  const double z = v - params.omega_H * state.xi;
  const double g = (2.0 / params.a) * z * probe;
  out.dxi = -params.omega_H * state.xi + v;
  out.dy = params.omega_L * (g - state.y);
  out.dx = -state.y;
  return out;
}

namespace {

EsState advance(const EsState& s, const EsDerivative& k, double h) {
  return {s.x + h * k.dx, s.xi + h * k.dxi, s.y + h * k.dy, s.t + h};
}

EsState rk4_step(const EsState& s, const EsParams& p, const ScalarFunction& f, double h) {
  const EsDerivative k1 = es_rhs(s, p, f);
  const EsDerivative k2 = es_rhs(advance(s, k1, h / 2), p, f);
  const EsDerivative k3 = es_rhs(advance(s, k2, h / 2), p, f);
  const EsDerivative k4 = es_rhs(advance(s, k3, h), p, f);
  EsState next;
  next.x = s.x + h / 6 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx);
  next.xi = s.xi + h / 6 * (k1.dxi + 2 * k2.dxi + 2 * k3.dxi + k4.dxi);
  next.y = s.y + h / 6 * (k1.dy + 2 * k2.dy + 2 * k3.dy + k4.dy);
  next.t = s.t + h;
  return next;
}

}  // namespace

EsTrajectory integrate_es(double x0, const EsParams& params, const ScalarFunction& f, double horizon,
                          double dt, std::size_t sample_every, double divergence_bound) {
  params.validate();
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "dt must be positive");
  if (!(horizon >= 0.0)) throw Error(ErrorKind::invalid_argument, "horizon must be non-negative");
  const double period = 2.0 * std::numbers::pi / params.omega;
  if (dt > period / 20.0 * (1.0 + 1e-12)) {
    throw Error(ErrorKind::invalid_argument,
                "dt = " + std::to_string(dt) + " resolves fewer than 20 steps per probe period");
  }
  if (sample_every == 0) sample_every = 1;

  EsTrajectory traj;
  EsState s{x0, 0.0, 0.0, 0.0};
  traj.states.push_back(s);
  const auto n_steps = static_cast<std::int64_t>(std::ceil(horizon / dt - 1e-9));
  for (std::int64_t i = 1; i <= n_steps; ++i) {
    const double h = std::min(dt, horizon - s.t);
    s = rk4_step(s, params, f, h);
    if (i == n_steps) s.t = horizon;
    if (!std::isfinite(s.x) || !std::isfinite(s.xi) || !std::isfinite(s.y) || std::abs(s.x) > divergence_bound) {
      traj.diverged = true;
      break;
    }
    if (i % static_cast<std::int64_t>(sample_every) == 0 || i == n_steps) traj.states.push_back(s);
  }
  return traj;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "quadrature needs at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and its derivative
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 1 ? x : p1;
      const double pn_1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn_1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

double average_dynamics(const ScalarFunction& f, double x, double a, double omega, int panels,
                        int nodes_per_panel) {
  if (!(a > 0.0) || !(omega > 0.0)) throw Error(ErrorKind::invalid_argument, "a and omega must be positive");
  if (panels < 1) throw Error(ErrorKind::invalid_argument, "need at least one panel");
  std::vector<double> nodes;
  std::vector<double> weights;
  gauss_legendre(nodes_per_panel, nodes, weights);
  // Substituting theta = wt turns (1/T) int_0^T into (1/2pi) int_0^{2pi}.
  const double width = 2.0 * std::numbers::pi / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    double panel = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double theta = mid + 0.5 * width * nodes[j];
      const double s = std::sin(theta);
      panel += weights[j] * f(x + a * s) * s;
    }
    total += 0.5 * width * panel;
  }
  return (2.0 / a) * total / (2.0 * std::numbers::pi);
}

BridgeReport discretization_bridge(const FilterParams& fp, std::shared_ptr<const Objective> objective,
                                   const DenseVector& x0, std::int64_t steps, std::uint64_t seed) {
  BridgeReport report;
  report.mapped = params_from_discretization(fp);  // validates feasibility
  ObjectiveOracle filter_oracle(objective);
  ObjectiveOracle hlf_oracle(objective);
  DirectionSource filter_dirs{RngStream(seed)};
  DirectionSource hlf_dirs{RngStream(seed)};
  FilterFormState filter_state = FilterFormState::start(x0);
  HlfState hlf_state = HlfState::start(x0);
  for (std::int64_t k = 0; k < steps; ++k) {
    step_filter_form(filter_state, filter_oracle, fp, filter_dirs);
    step_hlf(hlf_state, hlf_oracle, report.mapped, hlf_dirs);
    if (filter_state.diverged || hlf_state.diverged) {
      report.diverged = true;
      break;
    }
    const double scale = std::max(hlf_state.x.lpNorm<Eigen::Infinity>(), 1.0);
    const double dev = (filter_state.x - hlf_state.x).lpNorm<Eigen::Infinity>() / scale;
    report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
    report.steps = k + 1;
  }
  return report;
}

void write_es_trajectory_csv(std::ostream& os, const EsTrajectory& traj, const ScalarFunction& f, double f_star,
                             bool header) {
  if (header) os << "method,trial,t,f_value,gap,queries\n";
  for (const EsState& s : traj.states) {
    const double fx = f(s.x);
    os << "extremum_seeking,0," << format_real(s.t) << ',' << format_real(fx) << ',' << format_real(fx - f_star)
       << ",0\n";
  }
}

}  // namespace szo
