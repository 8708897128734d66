#include "szo/objectives.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace szo {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// 1 / (1 + exp(-t)) without overflow.
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void require_rows(std::size_t d, std::size_t n_rows) {
  if (d == 0 || n_rows == 0) {
    throw Error(ErrorKind::invalid_argument, "dataset needs d >= 1 and N >= 1");
  }
}

void require_two(const DenseVector& x) { require_dim(x, 2, "x"); }

}  // namespace

LogisticDataset gen_logistic(std::size_t d, std::size_t n_rows, const DenseVector& x_star, RngStream& rng) {
  require_rows(d, n_rows);
  require_dim(x_star, d, "x_star");
  LogisticDataset ds;
  ds.seed = rng.seed();
  ds.x_star = x_star;
  ds.A.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(d));
  ds.y.resize(static_cast<Eigen::Index>(n_rows));
  for (Eigen::Index i = 0; i < ds.A.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.A.cols(); ++j) ds.A(i, j) = rng.uniform(-1.0, 1.0);
    const double noise = rng.uniform(-0.5, 0.5);
    const double score = ds.A.row(i).dot(x_star) + noise;
    ds.y[i] = score >= 0.0 ? 1.0 : -1.0;
  }
  return ds;
}

RidgeDataset gen_ridge(std::size_t d, std::size_t n_rows, const DenseVector& x_star, double c,
                       double noise_std, RngStream& rng) {
  require_rows(d, n_rows);
  require_dim(x_star, d, "x_star");
  if (!(c > 0.0)) throw Error(ErrorKind::invalid_argument, "ridge weight c must be positive");
  if (!(noise_std >= 0.0)) throw Error(ErrorKind::invalid_argument, "noise_std must be non-negative");
  RidgeDataset ds;
  ds.seed = rng.seed();
  ds.x_star = x_star;
  ds.c = c;
  ds.noise_std = noise_std;
  ds.H.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < ds.H.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.H.cols(); ++j) ds.H(i, j) = rng.normal();
  }
  ds.b = ds.H * x_star;
  for (Eigen::Index i = 0; i < ds.b.size(); ++i) ds.b[i] += noise_std * rng.normal();
  return ds;
}

double logistic_value(const LogisticDataset& ds, const DenseVector& x) {
  require_dim(x, ds.dim(), "x");
  const DenseVector margins = ds.y.cwiseProduct(ds.A * x);
  double total = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) total += softplus(-margins[i]);
  return total / static_cast<double>(ds.rows());
}

DenseVector logistic_grad(const LogisticDataset& ds, const DenseVector& x) {
  require_dim(x, ds.dim(), "x");
  const DenseVector margins = ds.y.cwiseProduct(ds.A * x);
  DenseVector weights(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) weights[i] = -ds.y[i] * sigmoid(-margins[i]);
  return ds.A.transpose() * weights / static_cast<double>(ds.rows());
}

DenseMatrix logistic_hessian(const LogisticDataset& ds, const DenseVector& x) {
  require_dim(x, ds.dim(), "x");
  const DenseVector margins = ds.y.cwiseProduct(ds.A * x);
  DenseVector curvature(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double s = sigmoid(margins[i]);
    curvature[i] = s * (1.0 - s);
  }
  return ds.A.transpose() * curvature.asDiagonal() * ds.A / static_cast<double>(ds.rows());
}

double ridge_value(const RidgeDataset& ds, const DenseVector& x) {
  require_dim(x, ds.dim(), "x");
  return 0.5 * (ds.b - ds.H * x).squaredNorm() + 0.5 * ds.c * x.squaredNorm();
}

DenseVector ridge_grad(const RidgeDataset& ds, const DenseVector& x) {
  require_dim(x, ds.dim(), "x");
  return ds.H.transpose() * (ds.H * x - ds.b) + ds.c * x;
}

double beale_value(const DenseVector& x) {
  require_two(x);
  const double x1 = x[0];
  const double x2 = x[1];
  const double t1 = 1.5 - x1 + x1 * x2;
  const double t2 = 2.25 - x1 + x1 * x2 * x2;
  const double t3 = 2.625 - x1 + x1 * x2 * x2 * x2;
  return t1 * t1 + t2 * t2 + t3 * t3;
}

DenseVector beale_grad(const DenseVector& x) {
  require_two(x);
  const double x1 = x[0];
  const double x2 = x[1];
  const double t1 = 1.5 - x1 + x1 * x2;
  const double t2 = 2.25 - x1 + x1 * x2 * x2;
  const double t3 = 2.625 - x1 + x1 * x2 * x2 * x2;
  DenseVector g(2);
  g[0] = 2.0 * (t1 * (x2 - 1.0) + t2 * (x2 * x2 - 1.0) + t3 * (x2 * x2 * x2 - 1.0));
  g[1] = 2.0 * (t1 * x1 + t2 * 2.0 * x1 * x2 + t3 * 3.0 * x1 * x2 * x2);
  return g;
}

double matyas_value(const DenseVector& x) {
  require_two(x);
  return 0.26 * (x[0] * x[0] + x[1] * x[1]) - 0.48 * x[0] * x[1];
}

DenseVector matyas_grad(const DenseVector& x) {
  require_two(x);
  DenseVector g(2);
  g[0] = 0.52 * x[0] - 0.48 * x[1];
  g[1] = 0.52 * x[1] - 0.48 * x[0];
  return g;
}

std::string to_string(CertificateMethod method) {
  switch (method) {
    case CertificateMethod::closed_form: return "closed_form";
    case CertificateMethod::deterministic_descent: return "deterministic_descent";
    case CertificateMethod::known_constant: return "known_constant";
  }
  return "unknown";
}

OptimumCertificate ridge_optimum(const RidgeDataset& ds) {
  const auto d = static_cast<Eigen::Index>(ds.dim());
  DenseMatrix gram = ds.H.transpose() * ds.H;
  gram.diagonal().array() += ds.c;
  const DenseVector rhs = ds.H.transpose() * ds.b;
  Eigen::LLT<DenseMatrix> llt(gram);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-14) {
    throw Error(ErrorKind::solver_failure, "ridge normal matrix is not numerically positive definite");
  }
  DenseVector x = llt.solve(rhs);
  // One step of iterative refinement tightens the first-order residual.
  x += llt.solve(rhs - gram * x);
  if (x.size() != d || !x.allFinite()) {
    throw Error(ErrorKind::solver_failure, "ridge solve produced non-finite solution");
  }
  OptimumCertificate cert;
  cert.f_star = ridge_value(ds, x);
  cert.residual_grad_norm = ridge_grad(ds, x).norm();
  cert.x_star = std::move(x);
  cert.method = CertificateMethod::closed_form;
  return cert;
}

LogisticObjective::LogisticObjective(std::shared_ptr<const LogisticDataset> data) : data_(std::move(data)) {
  if (!data_) throw Error(ErrorKind::invalid_argument, "null logistic dataset");
}
double LogisticObjective::value(const DenseVector& x) const { return logistic_value(*data_, x); }
DenseVector LogisticObjective::gradient(const DenseVector& x) const { return logistic_grad(*data_, x); }

RidgeObjective::RidgeObjective(std::shared_ptr<const RidgeDataset> data) : data_(std::move(data)) {
  if (!data_) throw Error(ErrorKind::invalid_argument, "null ridge dataset");
}
double RidgeObjective::value(const DenseVector& x) const { return ridge_value(*data_, x); }
DenseVector RidgeObjective::gradient(const DenseVector& x) const { return ridge_grad(*data_, x); }

double BealeObjective::value(const DenseVector& x) const { return beale_value(x); }
DenseVector BealeObjective::gradient(const DenseVector& x) const { return beale_grad(x); }

double MatyasObjective::value(const DenseVector& x) const { return matyas_value(x); }
DenseVector MatyasObjective::gradient(const DenseVector& x) const { return matyas_grad(x); }

QuadraticObjective::QuadraticObjective(DenseMatrix A, DenseVector b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != A_.cols() || A_.rows() != b_.size() || b_.size() == 0) {
    throw Error(ErrorKind::dimension_mismatch, "quadratic needs square A matching b");
  }
  if (!A_.allFinite() || !b_.allFinite()) throw Error(ErrorKind::non_finite, "quadratic coefficients");
  const double scale = std::max(1.0, A_.cwiseAbs().maxCoeff());
  if ((A_ - A_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::invalid_argument, "quadratic Hessian is not symmetric");
  }
}

double QuadraticObjective::value(const DenseVector& x) const {
  require_dim(x, dim(), "x");
  return 0.5 * x.dot(A_ * x) + b_.dot(x);
}

DenseVector QuadraticObjective::gradient(const DenseVector& x) const {
  require_dim(x, dim(), "x");
  return A_ * x + b_;
}

double QuadraticObjective::smoothed_value(const DenseVector& x, double r) const {
  const double d = static_cast<double>(dim());
  return value(x) + r * r * A_.trace() / (2.0 * (d + 2.0));
}

std::shared_ptr<QuadraticObjective> quadratic_objective(DenseMatrix A, DenseVector b) {
  return std::make_shared<QuadraticObjective>(std::move(A), std::move(b));
}

namespace {

OptimumCertificate newton_descent(const LogisticObjective& obj, double tol, std::size_t max_iter) {
  const auto& ds = obj.data();
  DenseVector x = DenseVector::Zero(static_cast<Eigen::Index>(ds.dim()));
  double fx = obj.value(x);
  DenseVector g = obj.gradient(x);
  for (std::size_t it = 0; it < max_iter && g.norm() > tol; ++it) {
    DenseMatrix hess = logistic_hessian(ds, x);
    Eigen::LLT<DenseMatrix> llt(hess);
    DenseVector dir = llt.info() == Eigen::Success ? DenseVector(-llt.solve(g)) : DenseVector(-g);
    if (!dir.allFinite() || dir.dot(g) >= 0.0) dir = -g;
    // Armijo backtracking
    double step = 1.0;
    const double slope = dir.dot(g);
    DenseVector candidate = x + step * dir;
    double fc = obj.value(candidate);
    while (fc > fx + 1e-4 * step * slope && step > 1e-20) {
      step *= 0.5;
      candidate = x + step * dir;
      fc = obj.value(candidate);
    }
    if (step <= 1e-20) break;
    x = std::move(candidate);
    fx = fc;
    g = obj.gradient(x);
  }
  const double residual = g.norm();
  if (!(residual <= tol)) {
    throw Error(ErrorKind::iteration_limit,
                "logistic descent stopped with gradient norm " + std::to_string(residual) +
                    " (data may be separable)");
  }
  return {x, fx, CertificateMethod::deterministic_descent, residual};
}

}  // namespace

OptimumCertificate solve_optimum(const SmoothObjective& objective, double tol, std::size_t max_iter) {
  if (const auto* ridge = dynamic_cast<const RidgeObjective*>(&objective)) {
    return ridge_optimum(ridge->data());
  }
  if (const auto* logistic = dynamic_cast<const LogisticObjective*>(&objective)) {
    return newton_descent(*logistic, tol, max_iter);
  }
  if (dynamic_cast<const BealeObjective*>(&objective) != nullptr) {
    return {make_vector({3.0, 0.5}), 0.0, CertificateMethod::known_constant, 0.0};
  }
  if (dynamic_cast<const MatyasObjective*>(&objective) != nullptr) {
    return {make_vector({0.0, 0.0}), 0.0, CertificateMethod::known_constant, 0.0};
  }
  if (const auto* quad = dynamic_cast<const QuadraticObjective*>(&objective)) {
    Eigen::LLT<DenseMatrix> llt(quad->hessian());
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::solver_failure, "quadratic Hessian is not positive definite");
    }
    DenseVector x = llt.solve(-quad->linear());
    return {x, quad->value(x), CertificateMethod::closed_form, quad->gradient(x).norm()};
  }
  throw Error(ErrorKind::invalid_argument, "no optimum solver for objective " + objective.name());
}

}  // namespace szo
