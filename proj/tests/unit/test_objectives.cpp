#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "helpers.hpp"
#include "szo/objectives.hpp"
#include "szo/optimizers.hpp"

using namespace szo;
using szo::test::kind_of;

namespace {

std::shared_ptr<const RidgeDataset> identity_ridge() {
  auto ds = std::make_shared<RidgeDataset>();
  ds->H = DenseMatrix::Identity(2, 2);
  ds->b = make_vector({1.0, 2.0});
  ds->c = 0.1;
  ds->x_star = DenseVector::Zero(2);
  return ds;
}

bool bit_equal(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("logistic generator respects its contract") {
  RngStream rng(1);
  const LogisticDataset ds = gen_logistic(2, 20, DenseVector::Constant(2, 0.5), rng);
  CHECK(ds.rows() == 20);
  CHECK(ds.dim() == 2);
  CHECK(ds.A.cwiseAbs().maxCoeff() <= 1.0);
  for (Eigen::Index i = 0; i < ds.y.size(); ++i) CHECK((ds.y[i] == 1.0 || ds.y[i] == -1.0));
}

TEST_CASE("logistic labels with zero truth are balanced") {
  RngStream rng(2);
  const LogisticDataset ds = gen_logistic(3, 10000, DenseVector::Zero(3), rng);
  const double positive = (ds.y.array() > 0.0).cast<double>().mean();
  CHECK(std::abs(positive - 0.5) <= 0.05);
}

TEST_CASE("dataset generators are reproducible") {
  RngStream a(3);
  RngStream b(3);
  const LogisticDataset la = gen_logistic(4, 50, DenseVector::Constant(4, 0.5), a);
  const LogisticDataset lb = gen_logistic(4, 50, DenseVector::Constant(4, 0.5), b);
  CHECK(bit_equal(la.A, lb.A));
  CHECK(bit_equal(la.y, lb.y));
  RngStream c(4);
  RngStream d(4);
  const RidgeDataset ra = gen_ridge(5, 40, DenseVector::Ones(5), 0.1, 0.3, c);
  const RidgeDataset rb = gen_ridge(5, 40, DenseVector::Ones(5), 0.1, 0.3, d);
  CHECK(bit_equal(ra.H, rb.H));
  CHECK(bit_equal(ra.b, rb.b));
}

TEST_CASE("ridge generator without noise") {
  RngStream rng(5);
  const DenseVector truth = DenseVector::Constant(5, 0.5);
  const auto ds = std::make_shared<const RidgeDataset>(gen_ridge(5, 100, truth, 0.1, 0.0, rng));
  CHECK(bit_equal(ds->b, ds->H * truth));
  const OptimumCertificate cert = ridge_optimum(*ds);
  const DenseMatrix M = ds->H.transpose() * ds->H + 0.1 * DenseMatrix::Identity(5, 5);
  const double lambda_min = Eigen::SelfAdjointEigenSolver<DenseMatrix>(M).eigenvalues().minCoeff();
  CHECK((cert.x_star - truth).norm() <= 0.1 * truth.norm() / lambda_min);
}

TEST_CASE("ridge generator rejects non-positive c") {
  RngStream rng(6);
  CHECK(kind_of([&] { gen_ridge(2, 5, DenseVector::Ones(2), 0.0, 0.1, rng); }) == ErrorKind::invalid_argument);
}

TEST_CASE("logistic value at the origin is log 2") {
  RngStream rng(7);
  const LogisticDataset ds = gen_logistic(3, 30, DenseVector::Constant(3, 0.5), rng);
  CHECK(logistic_value(ds, DenseVector::Zero(3)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("logistic loss decreases to zero along a separating direction") {
  LogisticDataset ds;
  ds.A = DenseMatrix(1, 2);
  ds.A << 1.0, 0.0;
  ds.y = make_vector({1.0});
  double prev = logistic_value(ds, make_vector({0.0, 0.0}));
  for (double t : {1.0, 10.0, 100.0, 1000.0}) {
    const double v = logistic_value(ds, make_vector({t, 0.0}));
    CHECK(v < prev);
    CHECK(std::isfinite(v));
    prev = v;
  }
  CHECK(prev < 1e-300);
  // Large negative margins must not overflow.
  CHECK(logistic_value(ds, make_vector({-1000.0, 0.0})) == doctest::Approx(1000.0));
}

TEST_CASE("ridge value, gradient and optimum on H = I") {
  const auto ds = identity_ridge();
  CHECK(ridge_value(*ds, DenseVector::Zero(2)) == doctest::Approx(0.5 * 5.0));
  const OptimumCertificate cert = ridge_optimum(*ds);
  CHECK(cert.x_star[0] == doctest::Approx(1.0 / 1.1).epsilon(1e-14));
  CHECK(cert.x_star[1] == doctest::Approx(2.0 / 1.1).epsilon(1e-14));
  CHECK(cert.method == CertificateMethod::closed_form);
  const OptimumCertificate via_solver = solve_optimum(RidgeObjective(ds));
  CHECK((via_solver.x_star - cert.x_star).norm() <= 1e-15);
  CHECK(ridge_grad(*ds, cert.x_star).norm() <= 1e-12);
}

TEST_CASE("ridge optimum of generated datasets is first-order optimal") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RngStream rng(seed);
    const RidgeDataset ds = gen_ridge(10, 200, DenseVector::Ones(10), 0.1, std::sqrt(0.1), rng);
    const OptimumCertificate cert = ridge_optimum(ds);
    CHECK(cert.residual_grad_norm <= 1e-10);
    CHECK(ridge_grad(ds, cert.x_star).norm() <= 1e-10);
    CHECK(cert.f_star == doctest::Approx(ridge_value(ds, cert.x_star)));
  }
}

TEST_CASE("beale values") {
  CHECK(beale_value(make_vector({3.0, 0.5})) == 0.0);
  CHECK(beale_value(make_vector({0.0, 0.0})) == doctest::Approx(14.203125).epsilon(1e-15));
  CHECK(beale_grad(make_vector({3.0, 0.5})).norm() == 0.0);
  RngStream rng(8);
  for (int i = 0; i < 1000; ++i) {
    CHECK(beale_value(make_vector({rng.uniform(-4.5, 4.5), rng.uniform(-4.5, 4.5)})) >= 0.0);
  }
}

TEST_CASE("matyas values and gradient") {
  CHECK(matyas_value(make_vector({0.0, 0.0})) == 0.0);
  CHECK(matyas_value(make_vector({1.0, 1.0})) == doctest::Approx(0.04).epsilon(1e-14));
  const DenseVector g = matyas_grad(make_vector({1.0, 1.0}));
  CHECK(g[0] == doctest::Approx(0.04).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("quadratic surrogate") {
  const auto q = quadratic_objective(2.0 * DenseMatrix::Identity(2, 2), DenseVector::Zero(2));
  CHECK(q->smoothed_value(DenseVector::Zero(2), 0.1) == doctest::Approx(0.005).epsilon(1e-14));

  const auto linear = quadratic_objective(DenseMatrix::Zero(3, 3), make_vector({1.0, -1.0, 2.0}));
  const DenseVector x = make_vector({0.5, 0.2, -0.3});
  CHECK(linear->smoothed_value(x, 0.7) == linear->value(x));

  RngStream rng(9);
  DenseMatrix A(3, 3);
  A << 2.0, 0.5, 0.1, 0.5, 1.0, 0.2, 0.1, 0.2, 3.0;
  const auto general = quadratic_objective(A, make_vector({0.1, 0.2, 0.3}));
  for (int i = 0; i < 20; ++i) {
    const DenseVector p = make_vector({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    CHECK((general->smoothed_gradient(p).array() == (A * p + general->linear()).array()).all());
  }
}

TEST_CASE("quadratic rejects a non-symmetric Hessian") {
  DenseMatrix A(2, 2);
  A << 1.0, 2.0, 0.0, 1.0;
  CHECK(kind_of([&] { quadratic_objective(A, DenseVector::Zero(2)); }) == ErrorKind::invalid_argument);
}

TEST_CASE("known-constant certificates") {
  const OptimumCertificate m = solve_optimum(MatyasObjective());
  CHECK(m.method == CertificateMethod::known_constant);
  CHECK(m.f_star == 0.0);
  CHECK(m.x_star.isZero(0.0));
  const OptimumCertificate b = solve_optimum(BealeObjective());
  CHECK(b.f_star == 0.0);
  CHECK(b.x_star[0] == 3.0);
  CHECK(b.x_star[1] == 0.5);
}

TEST_CASE("logistic certificate is tight and bounds optimizer traces from below") {
  RngStream rng(1);
  const auto ds = std::make_shared<const LogisticDataset>(gen_logistic(2, 20, DenseVector::Constant(2, 0.5), rng));
  const auto objective = std::make_shared<const LogisticObjective>(ds);
  const OptimumCertificate cert = solve_optimum(*objective);
  CHECK(cert.method == CertificateMethod::deterministic_descent);
  CHECK(cert.residual_grad_norm <= 1e-10);
  CHECK(logistic_grad(*ds, cert.x_star).norm() <= 1e-10);

  SzoHyperparams hp;
  hp.eta = 0.05;
  hp.alpha = 0.9;
  hp.beta = 1.0;
  hp.z_init = ZInit::first_query_hold;
  ObjectiveOracle oracle(objective);
  DirectionSource dirs{RngStream(5)};
  const RunResult run = run_optimizer(Method::hlf_szo, oracle, DenseVector::Zero(2), 2000, hp, dirs);
  for (const TraceRecord& rec : run.trace.records()) CHECK(rec.f_x >= cert.f_star - 1e-9);
}

TEST_CASE("logistic certificate reports an exhausted iteration budget") {
  RngStream rng(1);
  const auto ds = std::make_shared<const LogisticDataset>(gen_logistic(2, 20, DenseVector::Constant(2, 0.5), rng));
  CHECK(kind_of([&] { solve_optimum(LogisticObjective(ds), 1e-10, 1); }) == ErrorKind::iteration_limit);
}
