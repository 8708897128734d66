#pragma once

#include <doctest.h>

#include <functional>
#include <memory>
#include <string>

#include "szo/core.hpp"

namespace szo::test {

/// Kind of the szo::Error thrown by fn; fails the test if nothing is thrown.
inline ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an szo::Error");
  return ErrorKind::io;
}

/// Objective defined by a lambda, for small hand-checked examples.
class LambdaObjective final : public Objective {
 public:
  LambdaObjective(std::size_t d, std::function<double(const DenseVector&)> f) : d_(d), f_(std::move(f)) {}
  std::size_t dim() const override { return d_; }
  double value(const DenseVector& x) const override { return f_(x); }
  std::string name() const override { return "lambda"; }

 private:
  std::size_t d_;
  std::function<double(const DenseVector&)> f_;
};

inline std::shared_ptr<const Objective> lambda(std::size_t d, std::function<double(const DenseVector&)> f) {
  return std::make_shared<LambdaObjective>(d, std::move(f));
}

inline std::shared_ptr<const Objective> squared_norm(std::size_t d) {
  return lambda(d, [](const DenseVector& x) { return x.squaredNorm(); });
}

inline std::shared_ptr<const Objective> constant(std::size_t d, double c) {
  return lambda(d, [c](const DenseVector&) { return c; });
}

}  // namespace szo::test
