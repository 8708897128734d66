#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "szo/es_sim.hpp"
#include "szo/objectives.hpp"

using namespace szo;
using szo::test::kind_of;

namespace {

const ScalarFunction square = [](double x) { return x * x; };

double period(double omega) { return 2.0 * std::numbers::pi / omega; }

}  // namespace

TEST_CASE("constant objective gives zero displacement per period") {
  EsParams p;
  p.a = 0.1;
  p.omega = 50.0;
  const ScalarFunction c = [](double) { return 3.0; };
  const EsTrajectory traj = integrate_es(0.7, p, c, period(p.omega), period(p.omega) / 200.0);
  CHECK(std::abs(traj.states.back().x - 0.7) <= 1e-10);
  CHECK(traj.states.back().t == period(p.omega));
}

TEST_CASE("high-pass rejects a constant objective") {
  EsParams p;
  p.a = 0.1;
  p.omega = 100.0;
  p.omega_H = 5.0;
  p.omega_L = 2.0;
  p.use_filters = true;
  const ScalarFunction c = [](double) { return 2.0; };
  const EsTrajectory traj = integrate_es(0.0, p, c, 2.0, period(p.omega) / 40.0, 10);
  const double z0 = es_high_pass_output(traj.states.front(), p, c);
  CHECK(z0 == 2.0);
  for (const EsState& s : traj.states) {
    CHECK(std::abs(es_high_pass_output(s, p, c)) <= std::abs(z0) * std::exp(-p.omega_H * s.t) + 1e-9);
  }
}

TEST_CASE("high-pass with omega_H = 0 passes f through") {
  EsParams p;
  p.omega_H = 0.0;
  p.use_filters = true;
  const EsState s{0.3, 17.0, 0.0, 0.01};
  const double v = square(s.x + p.a * std::sin(p.omega * s.t));
  CHECK(es_high_pass_output(s, p, square) == v);
}

TEST_CASE("unfiltered vector field") {
  EsParams p;
  p.a = 0.5;
  p.omega = 1.0;
  const EsState s{0.0, 0.0, 0.0, std::numbers::pi / 2};
  const EsDerivative d = es_rhs(s, p, square);
  CHECK(d.dx == doctest::Approx(-(2.0 / 0.5) * 0.25));
}

TEST_CASE("zero horizon returns the initial state") {
  EsParams p;
  const EsTrajectory traj = integrate_es(1.0, p, square, 0.0, period(p.omega) / 40.0);
  REQUIRE(traj.states.size() == 1);
  CHECK(traj.states[0].x == 1.0);
  CHECK_FALSE(traj.diverged);
}

TEST_CASE("coarse step and bad parameters are rejected") {
  EsParams p;
  CHECK(kind_of([&] { integrate_es(1.0, p, square, 1.0, period(p.omega) / 10.0); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([&] { integrate_es(1.0, p, square, 1.0, 0.0); }) == ErrorKind::invalid_argument);
  p.a = 0.0;
  CHECK(kind_of([&] { integrate_es(1.0, p, square, 1.0, 1e-4); }) == ErrorKind::invalid_argument);
}

TEST_CASE("divergence truncates the trajectory") {
  EsParams p;
  p.a = 0.1;
  p.omega = 10.0;
  const ScalarFunction steep = [](double x) { return -std::exp(x * x); };
  const EsTrajectory traj = integrate_es(3.0, p, steep, 100.0, period(p.omega) / 40.0, 1, 1e3);
  CHECK(traj.diverged);
  CHECK(traj.states.back().t < 100.0);
}

TEST_CASE("RK4 converges at fourth order") {
  EsParams p;
  p.a = 0.1;
  p.omega = 100.0;
  const double h = period(p.omega) / 40.0;
  const double horizon = 10.25 * period(p.omega);
  auto endpoint = [&](double dt) { return integrate_es(1.0, p, square, horizon, dt).states.back().x; };
  const double x1 = endpoint(h);
  const double x2 = endpoint(h / 2);
  const double x3 = endpoint(h / 4);
  const double order = std::log2(std::abs(x1 - x2) / std::abs(x2 - x3));
  CHECK(order >= 3.5);
  CHECK(order <= 4.5);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  std::vector<double> nodes;
  std::vector<double> weights;
  gauss_legendre(5, nodes, weights);
  double w = 0.0;
  double x8 = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    w += weights[i];
    x8 += weights[i] * std::pow(nodes[i], 8);
  }
  CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("average dynamics") {
  CHECK(std::abs(average_dynamics(square, 1.0, 0.3, 100.0) - 2.0) <= 1e-10);
  CHECK(std::abs(average_dynamics([](double) { return 5.0; }, 1.0, 0.3, 100.0)) <= 1e-10);

  const ScalarFunction quartic = [](double x) { return x * x * x * x; };
  const double e1 = std::abs(average_dynamics(quartic, 1.0, 0.01, 100.0) - 4.0);
  const double e2 = std::abs(average_dynamics(quartic, 1.0, 0.005, 100.0) - 4.0);
  CHECK(e1 / e2 >= 3.0);
  CHECK(e1 / e2 <= 5.0);
  CHECK(e1 <= 1e-3);
}

TEST_CASE("discretization bridge") {
  auto matyas = std::make_shared<const MatyasObjective>();
  const DenseVector x0 = make_vector({-5.0, -5.0});

  SUBCASE("interior parameters") {
    FilterParams fp;
    fp.delta = 0.05;
    fp.omega_L = 2.0;
    fp.omega_H = 20.0;
    const BridgeReport r = discretization_bridge(fp, matyas, x0, 2000, 3);
    CHECK(r.steps == 2000);
    CHECK(r.max_relative_deviation <= 1e-12);
  }
  SUBCASE("delta * omega_L = 1 is still exact") {
    FilterParams fp;
    fp.delta = 0.1;
    fp.omega_L = 10.0;
    fp.omega_H = 10.0;
    const BridgeReport r = discretization_bridge(fp, matyas, x0, 2000, 4);
    CHECK(r.mapped.alpha == 0.0);
    CHECK(r.max_relative_deviation <= 1e-12);
  }
  SUBCASE("infeasible parameters do not run") {
    FilterParams fp;
    fp.delta = 0.2;
    fp.omega_L = 10.0;
    CHECK(kind_of([&] { discretization_bridge(fp, matyas, x0, 10, 5); }) == ErrorKind::infeasible);
  }
}

TEST_CASE("trajectory CSV") {
  EsParams p;
  const EsTrajectory traj = integrate_es(1.0, p, square, 0.0, 1e-3);
  std::ostringstream os;
  write_es_trajectory_csv(os, traj, square, 0.0);
  CHECK(os.str() == "method,trial,t,f_value,gap,queries\nextremum_seeking,0,0,1,1,0\n");
}
