#include "szo/core.hpp"

#include <cmath>
#include <sstream>

namespace szo {

DenseVector make_vector(std::initializer_list<double> entries) {
  return make_vector(std::vector<double>(entries));
}

DenseVector make_vector(const std::vector<double>& entries) {
  if (entries.empty()) {
    throw Error(ErrorKind::invalid_argument, "vector dimension must be positive");
  }
  DenseVector x(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) x[static_cast<Eigen::Index>(i)] = entries[i];
  require_finite(x, "vector");
  return x;
}

void require_finite(const DenseVector& x, const std::string& what) {
  if (!x.allFinite()) {
    throw Error(ErrorKind::non_finite, what + " has non-finite entries " + format_vector(x));
  }
}

void require_dim(const DenseVector& x, std::size_t dim, const std::string& what) {
  if (static_cast<std::size_t>(x.size()) != dim) {
    throw Error(ErrorKind::dimension_mismatch, what + " has dimension " + std::to_string(x.size()) +
                                                   ", expected " + std::to_string(dim));
  }
}

std::string format_vector(const DenseVector& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    if (i == 8 && x.size() > 10) {
      os << "... [" << x.size() << " entries]";
      break;
    }
    os << x[i];
  }
  os << ')';
  return os.str();
}

ObjectiveOracle::ObjectiveOracle(std::shared_ptr<const Objective> objective)
    : objective_(std::move(objective)) {
  if (!objective_) throw Error(ErrorKind::invalid_argument, "null objective");
}

double ObjectiveOracle::eval(const DenseVector& x) {
  require_dim(x, objective_->dim(), "query point");
  ++queries_;
  const double v = objective_->value(x);
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::non_finite,
                objective_->name() + " returned " + std::to_string(v) + " at " + format_vector(x));
  }
  return v;
}

double counted_eval(ObjectiveOracle& oracle, const DenseVector& x) { return oracle.eval(x); }

void Trace::record(std::int64_t iter, const DenseVector& x, double f_x, std::uint64_t queries) {
  if (!records_.empty()) {
    if (iter <= records_.back().iter) {
      throw Error(ErrorKind::ordering, "trace iter " + std::to_string(iter) +
                                           " does not follow " + std::to_string(records_.back().iter));
    }
    if (queries < records_.back().queries) {
      throw Error(ErrorKind::ordering, "trace query count decreased");
    }
  } else if (iter < 0) {
    throw Error(ErrorKind::ordering, "trace iter must start at 0 or later");
  }
  TraceRecord rec;
  rec.iter = iter;
  if (store_x_) rec.x = x;
  rec.f_x = f_x;
  rec.queries = queries;
  records_.push_back(std::move(rec));
}

}  // namespace szo
