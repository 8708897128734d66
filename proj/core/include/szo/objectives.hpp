#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "szo/core.hpp"
#include "szo/rng.hpp"

namespace szo {

/// Binary classification data: rows A_i with labels y_i in {-1, +1}.
struct LogisticDataset {
  DenseMatrix A;  // N x d, |A_ij| <= 1
  DenseVector y;  // length N, entries exactly -1 or +1
  // Generator provenance, echoed by dataset export.
  std::uint64_t seed = 0;
  DenseVector x_star;

  std::size_t rows() const { return static_cast<std::size_t>(A.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(A.cols()); }
};

/// Least-squares data with Tikhonov weight c > 0.
struct RidgeDataset {
  DenseMatrix H;  // N x d
  DenseVector b;  // length N
  double c = 0.1;
  std::uint64_t seed = 0;
  DenseVector x_star;
  double noise_std = 0.0;

  std::size_t rows() const { return static_cast<std::size_t>(H.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(H.cols()); }
};

/// A_ij ~ Unif[-1,1], y_i = sign(A_i^T x_star + eps_i), eps_i ~ Unif[-0.5,0.5], sign(0) = +1.
/// Draw order per row: the d entries of A_i, then eps_i.
LogisticDataset gen_logistic(std::size_t d, std::size_t n_rows, const DenseVector& x_star, RngStream& rng);

/// H_ij ~ N(0,1), b = H x_star + eps with eps_i ~ N(0, noise_std^2). H is drawn row-major, then eps.
RidgeDataset gen_ridge(std::size_t d, std::size_t n_rows, const DenseVector& x_star, double c,
                       double noise_std, RngStream& rng);

double logistic_value(const LogisticDataset& ds, const DenseVector& x);
DenseVector logistic_grad(const LogisticDataset& ds, const DenseVector& x);
DenseMatrix logistic_hessian(const LogisticDataset& ds, const DenseVector& x);

double ridge_value(const RidgeDataset& ds, const DenseVector& x);
DenseVector ridge_grad(const RidgeDataset& ds, const DenseVector& x);

double beale_value(const DenseVector& x);
DenseVector beale_grad(const DenseVector& x);

double matyas_value(const DenseVector& x);
DenseVector matyas_grad(const DenseVector& x);

enum class CertificateMethod { closed_form, deterministic_descent, known_constant };

std::string to_string(CertificateMethod method);

struct OptimumCertificate {
  DenseVector x_star;
  double f_star = 0.0;
  CertificateMethod method = CertificateMethod::closed_form;
  double residual_grad_norm = 0.0;
};

/// Solves (H^T H + cI) x = H^T b by Cholesky.
OptimumCertificate ridge_optimum(const RidgeDataset& ds);

class LogisticObjective final : public SmoothObjective {
 public:
  explicit LogisticObjective(std::shared_ptr<const LogisticDataset> data);
  std::size_t dim() const override { return data_->dim(); }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  std::string name() const override { return "logistic"; }
  const LogisticDataset& data() const { return *data_; }

 private:
  std::shared_ptr<const LogisticDataset> data_;
};

class RidgeObjective final : public SmoothObjective {
 public:
  explicit RidgeObjective(std::shared_ptr<const RidgeDataset> data);
  std::size_t dim() const override { return data_->dim(); }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  std::string name() const override { return "ridge"; }
  const RidgeDataset& data() const { return *data_; }

 private:
  std::shared_ptr<const RidgeDataset> data_;
};

class BealeObjective final : public SmoothObjective {
 public:
  std::size_t dim() const override { return 2; }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  std::string name() const override { return "beale"; }
};

class MatyasObjective final : public SmoothObjective {
 public:
  std::size_t dim() const override { return 2; }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  std::string name() const override { return "matyas"; }
};

/// f(x) = 1/2 x^T A x + b^T x. Its ball-smoothed surrogate is known exactly:
/// f_r(x) = f(x) + r^2 tr(A) / (2(d+2)) and grad f_r = grad f.
class QuadraticObjective final : public SmoothObjective {
 public:
  QuadraticObjective(DenseMatrix A, DenseVector b);
  std::size_t dim() const override { return static_cast<std::size_t>(b_.size()); }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  std::string name() const override { return "quadratic"; }

  double smoothed_value(const DenseVector& x, double r) const;
  DenseVector smoothed_gradient(const DenseVector& x) const { return gradient(x); }

  const DenseMatrix& hessian() const { return A_; }
  const DenseVector& linear() const { return b_; }

 private:
  DenseMatrix A_;
  DenseVector b_;
};

std::shared_ptr<QuadraticObjective> quadratic_objective(DenseMatrix A, DenseVector b);

/// Certified minimum of an objective with analytic gradient. Ridge and positive
/// definite quadratics use a direct solve, Beale/Matyas their known minima, and
/// logistic a damped Newton descent run until ||grad|| <= tol.
OptimumCertificate solve_optimum(const SmoothObjective& objective, double tol = 1e-10,
                                 std::size_t max_iter = 500);

}  // namespace szo
