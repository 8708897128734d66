#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "szo/error.hpp"

namespace szo {

/// Decision variable. All arithmetic in the library is double precision.
using DenseVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Builds a vector and rejects NaN/Inf entries.
DenseVector make_vector(std::initializer_list<double> entries);
DenseVector make_vector(const std::vector<double>& entries);

/// Throws ErrorKind::non_finite naming `what` if any entry is NaN/Inf.
void require_finite(const DenseVector& x, const std::string& what);

/// Throws ErrorKind::dimension_mismatch unless x.size() == dim.
void require_dim(const DenseVector& x, std::size_t dim, const std::string& what);

std::string format_vector(const DenseVector& x);

/// Value-only black box f: R^d -> R.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::size_t dim() const = 0;
  virtual double value(const DenseVector& x) const = 0;
  virtual std::string name() const = 0;
};

/// Objective with an analytic gradient. Only verification and benchmark
/// code may call gradient(); the zeroth-order steppers never do.
class SmoothObjective : public Objective {
 public:
  virtual DenseVector gradient(const DenseVector& x) const = 0;
};

/// Counts every evaluation of the wrapped objective. One oracle per trial.
class ObjectiveOracle {
 public:
  explicit ObjectiveOracle(std::shared_ptr<const Objective> objective);

  std::size_t dim() const { return objective_->dim(); }
  std::uint64_t query_count() const { return queries_; }
  const Objective& objective() const { return *objective_; }
  std::shared_ptr<const Objective> shared_objective() const { return objective_; }

  /// Evaluates f(x) and increments the query counter by one.
  double eval(const DenseVector& x);

 private:
  std::shared_ptr<const Objective> objective_;
  std::uint64_t queries_ = 0;
};

double counted_eval(ObjectiveOracle& oracle, const DenseVector& x);

struct TraceRecord {
  std::int64_t iter = 0;
  std::optional<DenseVector> x;  // omitted for high-dimensional runs
  double f_x = 0.0;
  std::uint64_t queries = 0;
};

/// Per-iteration history of one optimizer run.
class Trace {
 public:
  Trace() = default;
  explicit Trace(bool store_x) : store_x_(store_x) {}

  /// Appends a record. iter must strictly increase and queries must not decrease.
  void record(std::int64_t iter, const DenseVector& x, double f_x, std::uint64_t queries);

  const std::vector<TraceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const TraceRecord& back() const { return records_.back(); }
  bool stores_x() const { return store_x_; }

 private:
  std::vector<TraceRecord> records_;
  bool store_x_ = true;
};

}  // namespace szo
