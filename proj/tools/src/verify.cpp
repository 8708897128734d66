#include "szo_cli/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <sstream>

#include "szo/es_sim.hpp"
#include "szo/objectives.hpp"
#include "szo/optimizers.hpp"
#include "szo/sampling.hpp"
#include "szo/theorem.hpp"

namespace szo::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Check make_check(std::string name, bool passed, double measured, double limit, std::string detail) {
  Check c;
  c.name = std::move(name);
  c.passed = passed;
  c.measured = measured;
  c.limit = limit;
  c.detail = std::move(detail);
  return c;
}

// Symmetric positive definite matrix with eigenvalues in [lo, hi].
DenseMatrix random_spd(RngStream& rng, std::size_t d, double lo, double hi) {
  const auto n = static_cast<Eigen::Index>(d);
  DenseMatrix M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<DenseMatrix> qr(M);
  const DenseMatrix Q = qr.householderQ();
  DenseVector lambda(n);
  for (Eigen::Index i = 0; i < n; ++i) lambda[i] = rng.uniform(lo, hi);
  DenseMatrix A = Q * lambda.asDiagonal() * Q.transpose();
  return 0.5 * (A + A.transpose());
}

DenseVector random_vector(RngStream& rng, std::size_t d, double lo, double hi) {
  DenseVector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

std::shared_ptr<const RidgeDataset> small_ridge(std::uint64_t seed) {
  RngStream rng(seed);
  return std::make_shared<const RidgeDataset>(
      gen_ridge(5, 100, DenseVector::Constant(5, 0.5), 0.1, std::sqrt(0.1), rng));
}

std::shared_ptr<const LogisticDataset> small_logistic(std::uint64_t seed, std::size_t d, std::size_t n) {
  RngStream rng(seed);
  return std::make_shared<const LogisticDataset>(gen_logistic(d, n, DenseVector::Constant(d, 0.5), rng));
}

using Stepper = void (*)(HlfState&, ObjectiveOracle&, const SzoHyperparams&, DirectionSource&);

bool same_bits(const DenseVector& a, const DenseVector& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

// Number of steps after which the two runs first differ, or -1 if never.
std::int64_t first_divergence(Stepper lhs, const SzoHyperparams& lhs_hp, Stepper rhs, const SzoHyperparams& rhs_hp,
                              std::shared_ptr<const Objective> objective, const DenseVector& x0, std::int64_t steps,
                              std::uint64_t seed) {
  ObjectiveOracle oa(objective);
  ObjectiveOracle ob(objective);
  DirectionSource da{RngStream(seed)};
  DirectionSource db{RngStream(seed)};
  HlfState a = HlfState::start(x0);
  HlfState b = HlfState::start(x0);
  for (std::int64_t k = 0; k < steps; ++k) {
    lhs(a, oa, lhs_hp, da);
    rhs(b, ob, rhs_hp, db);
    if (!same_bits(a.x, b.x) || a.diverged != b.diverged || oa.query_count() != ob.query_count()) return k + 1;
  }
  return -1;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json doc;
  doc["suite"] = suite;
  doc["passed"] = passed();
  doc["checks"] = nlohmann::json::array();
  for (const Check& c : checks) {
    doc["checks"].push_back({{"name", c.name},
                             {"passed", c.passed},
                             {"measured", c.measured},
                             {"limit", c.limit},
                             {"seconds", c.seconds},
                             {"detail", c.detail}});
  }
  return doc;
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"sampling", "reductions", "filter_bridge",
                                              "es_averaging", "gradients", "theorem_arith"};
  return names;
}

std::vector<Check> check_reductions(std::int64_t steps) {
  const auto objective = std::make_shared<const RidgeObjective>(small_ridge(11));
  const DenseVector x0 = DenseVector::Zero(5);
  std::vector<Check> out;
  for (ZInit init : {ZInit::first_query, ZInit::first_query_hold}) {
    SzoHyperparams base;
    base.eta = 6e-6;
    base.r = 0.1;
    base.alpha = 0.9;
    base.beta = 1.0;
    base.z_init = init;
    SzoHyperparams no_alpha = base;
    no_alpha.alpha = 0.0;
    SzoHyperparams no_beta = base;
    no_beta.beta = 0.0;

    struct Case {
      const char* name;
      Stepper lhs;
      SzoHyperparams lhs_hp;
      Stepper rhs;
      SzoHyperparams rhs_hp;
    };
    // A z-start that holds the iterate on step 0 has no counterpart in vanilla
    // and LF, so those identities are checked with the plain start only.
    std::vector<Case> cases{{"hlf(alpha=0) == hf", step_hlf, no_alpha, step_hf, base}};
    if (init == ZInit::first_query) {
      cases.push_back({"hlf(beta=0) == lf", step_hlf, no_beta, step_lf, base});
      cases.push_back({"hf(beta=0) == vanilla", step_hf, no_beta, step_vanilla, base});
      cases.push_back({"lf(alpha=0) == vanilla", step_lf, no_alpha, step_vanilla, base});
    }
    for (const Case& c : cases) {
      const auto start = Clock::now();
      const std::int64_t at = first_divergence(c.lhs, c.lhs_hp, c.rhs, c.rhs_hp, objective, x0, steps, 42);
      Check check = make_check(std::string(c.name) + " [" + std::string(to_string(init)) + "]", at < 0,
                               static_cast<double>(at < 0 ? steps : at), static_cast<double>(steps),
                               at < 0 ? "bitwise identical iterates over " + std::to_string(steps) + " steps"
                                      : "iterates differ after step " + std::to_string(at));
      check.seconds = seconds_since(start);
      out.push_back(check);
    }
  }
  return out;
}

Check check_filter_bridge(std::int64_t steps, std::size_t n_params) {
  const auto start = Clock::now();
  const auto objective = std::make_shared<const MatyasObjective>();
  const DenseVector x0 = make_vector({-5.0, -5.0});
  RngStream rng(2024);
  double worst = 0.0;
  bool any_diverged = false;
  std::ostringstream detail;
  for (std::size_t i = 0; i < n_params; ++i) {
    // Draw in hyperparameter space, then map to a feasible discretization.
    const double alpha = rng.uniform(0.5, 0.95);
    const double eta = std::exp(rng.uniform(std::log(1e-4), std::log(5e-3)));
    const double beta = rng.uniform(0.3, 1.7);
    FilterParams fp;
    fp.delta = eta / (1.0 - alpha);
    fp.omega_L = (1.0 - alpha) / fp.delta;
    fp.omega_H = beta / fp.delta;
    fp.r = 0.1;
    const BridgeReport rep = discretization_bridge(fp, objective, x0, steps, 100 + i);
    any_diverged = any_diverged || rep.diverged || rep.steps != steps;
    worst = std::max(worst, rep.max_relative_deviation);
    detail << "(delta=" << fmt(fp.delta) << ", wH=" << fmt(fp.omega_H) << ", wL=" << fmt(fp.omega_L)
           << "): " << fmt(rep.max_relative_deviation) << "; ";
  }
  Check c = make_check("filter form == hlf under the discretization map", !any_diverged && worst <= 1e-12, worst,
                       1e-12, detail.str() + (any_diverged ? "a run diverged" : ""));
  c.seconds = seconds_since(start);
  return c;
}

Check check_estimator_unbiasedness(std::size_t n_points, std::size_t samples) {
  const auto start = Clock::now();
  RngStream rng(7);
  std::size_t inside = 0;
  std::size_t total = 0;
  for (std::size_t p = 0; p < n_points; ++p) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng.uniform() * 5.0);
    auto q = quadratic_objective(random_spd(rng, d, 0.5, 3.0), random_vector(rng, d, -1.0, 1.0));
    const DenseVector x = random_vector(rng, d, -1.0, 1.0);
    const double r = rng.uniform(0.05, 0.5);
    ObjectiveOracle oracle(q);
    RngStream draws = derive(rng, p);
    const VectorEstimate est = estimate_smoothed_gradient(oracle, x, r, samples, draws);
    const DenseVector exact = q->smoothed_gradient(x);
    for (Eigen::Index i = 0; i < exact.size(); ++i) {
      ++total;
      if (std::abs(est.mean[i] - exact[i]) <= 3.0 * est.std_error[i]) ++inside;
    }
  }
  const double frac = static_cast<double>(inside) / static_cast<double>(total);
  Check c = make_check("single-point estimator is unbiased for grad f_r", frac >= 0.95, frac, 0.95,
                       std::to_string(inside) + "/" + std::to_string(total) + " components within 3 se (" +
                           std::to_string(samples) + " samples per point)");
  c.seconds = seconds_since(start);
  return c;
}

std::vector<Check> check_smoothing_bounds(std::size_t n_points, std::size_t samples) {
  std::vector<Check> out;
  RngStream rng(8);

  auto run = [&](const std::string& name, const std::function<std::shared_ptr<const Objective>(RngStream&, double&)>& make,
                 std::size_t d) {
    const auto start = Clock::now();
    std::size_t upper_ok = 0;
    std::size_t lower_ok = 0;
    double worst_excess = -1e300;
    for (std::size_t p = 0; p < n_points; ++p) {
      double L = 0.0;
      auto objective = make(rng, L);
      const DenseVector x = random_vector(rng, d, -1.0, 1.0);
      const double r = rng.uniform(0.1, 1.0);
      ObjectiveOracle oracle(objective);
      RngStream draws = derive(rng, 1000 + p);
      const MeanEstimate fr = estimate_smoothed_value(oracle, x, r, samples, draws);
      const double f = objective->value(x);
      const double allowed = L * r * r / 2.0 + 3.0 * fr.std_error;
      if (std::abs(fr.mean - f) <= allowed) ++upper_ok;
      if (fr.mean >= f - 3.0 * fr.std_error) ++lower_ok;
      worst_excess = std::max(worst_excess, std::abs(fr.mean - f) - allowed);
    }
    Check upper = make_check("|f_r - f| <= L r^2/2 on " + name, upper_ok == n_points,
                             static_cast<double>(upper_ok), static_cast<double>(n_points),
                             std::to_string(upper_ok) + "/" + std::to_string(n_points) +
                                 " points; worst margin " + fmt(worst_excess));
    Check lower = make_check("f_r >= f (convex) on " + name, lower_ok == n_points, static_cast<double>(lower_ok),
                             static_cast<double>(n_points),
                             std::to_string(lower_ok) + "/" + std::to_string(n_points) + " points");
    upper.seconds = lower.seconds = seconds_since(start);
    out.push_back(upper);
    out.push_back(lower);
  };

  run("quadratic",
      [](RngStream& g, double& L) {
        DenseMatrix A = random_spd(g, 4, 0.5, 3.0);
        L = Eigen::SelfAdjointEigenSolver<DenseMatrix>(A).eigenvalues().maxCoeff();
        return std::static_pointer_cast<const Objective>(quadratic_objective(A, random_vector(g, 4, -1.0, 1.0)));
      },
      4);
  run("logistic",
      [](RngStream& g, double& L) {
        auto data = small_logistic(g.next_u64(), 3, 50);
        const DenseMatrix AtA = data->A.transpose() * data->A;
        L = Eigen::SelfAdjointEigenSolver<DenseMatrix>(AtA).eigenvalues().maxCoeff() /
            (4.0 * static_cast<double>(data->rows()));
        return std::static_pointer_cast<const Objective>(std::make_shared<const LogisticObjective>(data));
      },
      3);

  // The quadratic surrogate is known exactly: compare the Monte-Carlo value against it.
  {
    const auto start = Clock::now();
    RngStream g(9);
    std::size_t ok = 0;
    for (std::size_t p = 0; p < n_points; ++p) {
      auto q = quadratic_objective(random_spd(g, 3, 0.5, 3.0), random_vector(g, 3, -1.0, 1.0));
      const DenseVector x = random_vector(g, 3, -1.0, 1.0);
      const double r = g.uniform(0.1, 1.0);
      ObjectiveOracle oracle(q);
      RngStream draws = derive(g, p);
      const MeanEstimate fr = estimate_smoothed_value(oracle, x, r, samples, draws);
      if (std::abs(fr.mean - q->smoothed_value(x, r)) <= 4.0 * fr.std_error) ++ok;
    }
    Check c = make_check("Monte-Carlo f_r matches closed form on quadratics", ok == n_points, static_cast<double>(ok),
                         static_cast<double>(n_points), std::to_string(ok) + " points within 4 se");
    c.seconds = seconds_since(start);
    out.push_back(c);
  }
  return out;
}

std::vector<Check> check_samplers(std::size_t samples) {
  std::vector<Check> out;
  const std::size_t d = 5;
  const auto start = Clock::now();
  RngStream rng(5);
  double max_norm_err = 0.0;
  DenseVector sum = DenseVector::Zero(d);
  DenseVector sum_sq = DenseVector::Zero(d);
  for (std::size_t i = 0; i < samples; ++i) {
    const SphereSample s = sample_sphere(rng, d);
    max_norm_err = std::max(max_norm_err, std::abs(s.u().norm() - 1.0));
    sum += s.u();
    sum_sq += s.u().cwiseProduct(s.u());
  }
  const double n = static_cast<double>(samples);
  const double dd = static_cast<double>(d);
  const double mean_err = (sum / n).cwiseAbs().maxCoeff();
  const double mean_tol = 4.0 * std::sqrt(1.0 / (dd * n));
  const double second_err = (sum_sq / n - DenseVector::Constant(d, 1.0 / dd)).cwiseAbs().maxCoeff();
  const double second_tol = 4.0 * std::sqrt((3.0 / (dd * (dd + 2.0)) - 1.0 / (dd * dd)) / n);
  out.push_back(make_check("sphere samples have unit norm", max_norm_err <= 1e-14, max_norm_err, 1e-14, ""));
  out.push_back(make_check("sphere samples have zero mean", mean_err <= mean_tol, mean_err, mean_tol, "4 se band"));
  out.push_back(make_check("sphere samples have second moment I/d", second_err <= second_tol, second_err,
                           second_tol, "4 se band"));

  double max_radius = 0.0;
  std::size_t inner = 0;
  double radius_sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double rad = sample_ball(rng, d).norm();
    max_radius = std::max(max_radius, rad);
    radius_sum += rad;
    if (rad <= 0.5) ++inner;
  }
  const double p_inner = std::pow(0.5, dd);
  const double frac = static_cast<double>(inner) / n;
  const double frac_tol = 4.0 * std::sqrt(p_inner * (1.0 - p_inner) / n);
  // E|y| = d/(d+1), Var|y| = d/(d+2) - (d/(d+1))^2.
  const double mean_r = dd / (dd + 1.0);
  const double r_tol = 4.0 * std::sqrt((dd / (dd + 2.0) - mean_r * mean_r) / n);
  out.push_back(make_check("ball samples lie in the unit ball", max_radius <= 1.0, max_radius, 1.0, ""));
  out.push_back(make_check("ball radial law P(|y| <= 1/2) = 2^-d", std::abs(frac - p_inner) <= frac_tol,
                           std::abs(frac - p_inner), frac_tol, "4 se band"));
  out.push_back(make_check("ball mean radius d/(d+1)", std::abs(radius_sum / n - mean_r) <= r_tol,
                           std::abs(radius_sum / n - mean_r), r_tol, "4 se band"));
  const double secs = seconds_since(start);
  for (Check& c : out) c.seconds = secs;
  return out;
}

std::vector<Check> check_es_averaging() {
  std::vector<Check> out;
  auto start = Clock::now();

  // Quadratics: the averaged field equals f'(x) for every amplitude.
  double worst = 0.0;
  RngStream rng(31);
  for (int i = 0; i < 20; ++i) {
    const double c2 = rng.uniform(0.1, 3.0);
    const double c1 = rng.uniform(-2.0, 2.0);
    const double c0 = rng.uniform(-2.0, 2.0);
    const double x = rng.uniform(-3.0, 3.0);
    const double a = rng.uniform(0.01, 0.5);
    const ScalarFunction f = [=](double s) { return c2 * s * s + c1 * s + c0; };
    worst = std::max(worst, std::abs(average_dynamics(f, x, a, 100.0) - (2.0 * c2 * x + c1)));
  }
  Check quad = make_check("averaged field equals f' on quadratics", worst <= 1e-10, worst, 1e-10, "20 random cases");
  quad.seconds = seconds_since(start);
  out.push_back(quad);

  // f = x^4: the averaged field is 4x^3 + 3x a^2, so halving a cuts the error by 4.
  start = Clock::now();
  const ScalarFunction quartic = [](double s) { return s * s * s * s; };
  const double x = 1.0;
  const double e1 = std::abs(average_dynamics(quartic, x, 0.1, 100.0) - 4.0);
  const double e2 = std::abs(average_dynamics(quartic, x, 0.05, 100.0) - 4.0);
  const double factor = e1 / e2;
  Check quartic_check = make_check("a-halving error decay on x^4", factor >= 3.0 && factor <= 5.0, factor, 4.0,
                                   "errors " + fmt(e1) + " -> " + fmt(e2) + "; accepted range [3, 5]");
  quartic_check.seconds = seconds_since(start);
  out.push_back(quartic_check);

  // RK4 tracking of the averaged flow x' = -f'(x) = -2x for f = x^2.
  start = Clock::now();
  EsParams params;
  params.a = 0.1;
  params.omega = 1000.0;
  const double period = 2.0 * M_PI / params.omega;
  const double x0 = 1.0;
  const ScalarFunction square = [](double s) { return s * s; };
  const EsTrajectory traj = integrate_es(x0, params, square, 2.0, period / 40.0, 1);
  double sup = 0.0;
  for (const EsState& s : traj.states) sup = std::max(sup, std::abs(s.x - x0 * std::exp(-2.0 * s.t)));
  const double rel = sup / std::abs(x0);
  Check track = make_check("RK4 ES loop tracks the averaged gradient flow", !traj.diverged && rel <= 0.05, rel, 0.05,
                           "sup-norm deviation relative to |x0|; a=0.1, omega=1000, horizon 2");
  track.seconds = seconds_since(start);
  out.push_back(track);
  return out;
}

std::vector<Check> check_gradients(std::size_t n_points) {
  std::vector<Check> out;
  RngStream rng(77);

  auto fd_check = [&](const std::string& name, const SmoothObjective& obj, double lo, double hi) {
    const auto start = Clock::now();
    double worst = 0.0;
    for (std::size_t p = 0; p < n_points; ++p) {
      const DenseVector x = random_vector(rng, obj.dim(), lo, hi);
      const DenseVector g = obj.gradient(x);
      DenseVector fd(g.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
        DenseVector xp = x;
        DenseVector xm = x;
        xp[i] += h;
        xm[i] -= h;
        fd[i] = (obj.value(xp) - obj.value(xm)) / (xp[i] - xm[i]);
      }
      const double rel = (g - fd).lpNorm<Eigen::Infinity>() / std::max(g.lpNorm<Eigen::Infinity>(), 1.0);
      worst = std::max(worst, rel);
    }
    Check c = make_check(name + " gradient matches central differences", worst <= 1e-6, worst, 1e-6,
                         std::to_string(n_points) + " random points; error / max(|grad|_inf, 1)");
    c.seconds = seconds_since(start);
    out.push_back(c);
  };

  fd_check("logistic", LogisticObjective(small_logistic(3, 10, 200)), -2.0, 2.0);
  fd_check("ridge", RidgeObjective(small_ridge(4)), -2.0, 2.0);
  fd_check("beale", BealeObjective(), -2.0, 2.0);
  fd_check("matyas", MatyasObjective(), -10.0, 10.0);
  fd_check("quadratic", *quadratic_objective(random_spd(rng, 6, 0.1, 5.0), random_vector(rng, 6, -1.0, 1.0)), -3.0,
           3.0);
  return out;
}

namespace {

TheoremInputs grid_point(double L, double d, double T) {
  TheoremInputs in;
  in.L = L;
  in.d = d;
  in.T = T;
  in.alpha = 0.5;
  in.beta = 0.8;
  return in;
}

}  // namespace

std::vector<Check> check_theorem_arith() {
  std::vector<Check> out;
  const auto start = Clock::now();
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::abs(b); };

  TheoremInputs worked;
  worked.L = 1.0;
  worked.G = 1.0;
  worked.d = 2.0;
  worked.T = 1000.0;
  worked.alpha = 0.0;
  worked.beta = 1.0;
  const TheoremBounds b = theorem_bounds(worked);
  out.push_back(make_check("worked example eta_max = 0.002", near(b.eta_max, 0.002), b.eta_max, 0.002, ""));
  out.push_back(make_check("worked example r_min = 0.016", near(b.r_min, 0.016), b.r_min, 0.016, ""));
  out.push_back(make_check("worked example r_max = 0.1", near(b.r_max, 0.1), b.r_max, 0.1, ""));
  out.push_back(make_check("worked example is feasible", b.feasible, b.feasible ? 1.0 : 0.0, 1.0, ""));

  TheoremInputs bounded = worked;
  bounded.initial_gap = 1.0;
  const double convex = *theorem_bounds(bounded).bound_leading_term;
  bounded.which = TheoremCase::nonconvex;
  const double nonconvex = *theorem_bounds(bounded).bound_leading_term;
  // (d / T^{2/3}) (75 L D / 4 + 3 G^2 / (4 L d)) and (d / T^{2/3}) (100 L D + 8 G^2 / d).
  out.push_back(make_check("convex bound term", std::abs(convex - 0.3825) <= 1e-12, convex, 0.3825, ""));
  out.push_back(make_check("nonconvex bound term", std::abs(nonconvex - 2.08) <= 1e-12, nonconvex, 2.08, ""));

  TheoremInputs infeasible;
  infeasible.d = 50.0;
  infeasible.T = 8.0;
  infeasible.alpha = 0.9;
  infeasible.eta = 8e-4;
  const TheoremBounds ib = theorem_bounds(infeasible);
  out.push_back(make_check("eta = 8e-4 at d=50, T=8, alpha=0.9 is reported infeasible",
                           !ib.feasible && std::abs(ib.r_min - 1.6) <= 1e-12 && std::abs(ib.r_max - 0.5) <= 1e-12,
                           ib.r_min, ib.r_max, ib.infeasibility));
  infeasible.eta.reset();
  const TheoremBounds fb = theorem_bounds(infeasible);
  out.push_back(make_check("same inputs at eta_max = 4e-5 are feasible", fb.feasible && near(fb.eta_max, 4e-5),
                           fb.eta_max, 4e-5, ""));

  bool beta_peak = true;
  const double at_one = theorem_bounds(worked).eta_max;
  for (double beta = 0.05; beta < 1.96; beta += 0.05) {
    TheoremInputs in = worked;
    in.beta = beta;
    if (std::abs(beta - 1.0) > 1e-9 && !(theorem_bounds(in).eta_max < at_one)) beta_peak = false;
  }
  out.push_back(make_check("beta = 1 maximizes eta_max", beta_peak, at_one, at_one, "beta grid 0.05..1.95"));

  const std::vector<double> Ls{0.5, 1.0, 2.0, 4.0};
  const std::vector<double> ds{1.0, 2.0, 10.0, 50.0};
  const std::vector<double> Ts{10.0, 100.0, 1000.0, 10000.0};
  std::size_t violations = 0;
  std::size_t comparisons = 0;
  for (double L : Ls) {
    for (double d : ds) {
      for (std::size_t i = 0; i + 1 < Ts.size(); ++i) {
        const TheoremInputs lo = grid_point(L, d, Ts[i]);
        const TheoremInputs hi = grid_point(L, d, Ts[i + 1]);
        const TheoremBounds a = theorem_bounds(lo);
        const TheoremBounds c = theorem_bounds(hi);
        comparisons += 2;
        if (!(c.eta_max < a.eta_max)) ++violations;
        if (!(c.r_max < a.r_max)) ++violations;
      }
    }
  }
  for (double T : Ts) {
    for (std::size_t i = 0; i + 1 < Ls.size(); ++i) {
      for (double d : ds) {
        ++comparisons;
        if (!(theorem_bounds(grid_point(Ls[i + 1], d, T)).eta_max < theorem_bounds(grid_point(Ls[i], d, T)).eta_max)) {
          ++violations;
        }
      }
    }
    for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
      for (double L : Ls) {
        ++comparisons;
        if (!(theorem_bounds(grid_point(L, ds[i + 1], T)).eta_max < theorem_bounds(grid_point(L, ds[i], T)).eta_max)) {
          ++violations;
        }
      }
    }
  }
  out.push_back(make_check("eta_max decreasing in L, d, T; r_max decreasing in T", violations == 0,
                           static_cast<double>(violations), 0.0,
                           std::to_string(comparisons) + " pairwise comparisons on a 4x4x4 grid"));
  const double secs = seconds_since(start);
  for (Check& c : out) c.seconds = secs;
  return out;
}

VerifyReport run_verify(std::string_view suite) {
  VerifyReport report;
  report.suite = std::string(suite);
  auto append = [&](std::vector<Check> checks) {
    for (Check& c : checks) report.checks.push_back(std::move(c));
  };
  if (suite == "sampling") {
    append(check_samplers());
    report.checks.push_back(check_estimator_unbiasedness());
    append(check_smoothing_bounds());
  } else if (suite == "reductions") {
    append(check_reductions());
  } else if (suite == "filter_bridge") {
    report.checks.push_back(check_filter_bridge());
  } else if (suite == "es_averaging") {
    append(check_es_averaging());
  } else if (suite == "gradients") {
    append(check_gradients());
  } else if (suite == "theorem_arith") {
    append(check_theorem_arith());
  } else {
    throw Error(ErrorKind::invalid_argument, "unknown verify suite '" + std::string(suite) + "'");
  }
  return report;
}

}  // namespace szo::cli
