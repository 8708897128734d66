#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace szo::cli {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
  double measured = 0.0;
  double limit = 0.0;
  double seconds = 0.0;
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;
  bool passed() const;
  nlohmann::json to_json() const;
};

const std::vector<std::string>& verify_suites();

/// Runs a named suite with fixed seeds. Throws ErrorKind::invalid_argument for an unknown name.
VerifyReport run_verify(std::string_view suite);

// Individual checks, shared by the verify command and the acceptance suite.

/// hlf(alpha=0) == hf, hlf(beta=0) == lf, hf(beta=0) == vanilla, lf(alpha=0) == vanilla,
/// bit for bit over `steps` iterations on a d=5 ridge problem.
std::vector<Check> check_reductions(std::int64_t steps = 1000);

/// Filter form against HLF-SZO with mapped parameters for `n_params` random
/// feasible (delta, omega_H, omega_L); max relative deviation <= 1e-12.
Check check_filter_bridge(std::int64_t steps = 10000, std::size_t n_params = 5);

/// Monte-Carlo mean of single-point estimates against grad f on random
/// quadratics: at least 95% of components inside 3 standard errors.
Check check_estimator_unbiasedness(std::size_t n_points = 10, std::size_t samples = 1000000);

/// |f_r - f| <= L r^2 / 2 + 3 se and f_r >= f - 3 se on quadratic and logistic objectives.
std::vector<Check> check_smoothing_bounds(std::size_t n_points = 10, std::size_t samples = 200000);

/// Sphere and ball samplers: norms, mean, second moment, radial law.
std::vector<Check> check_samplers(std::size_t samples = 200000);

/// Averaged ES vector field on quadratics and x^4, and RK4 tracking of the averaged flow.
std::vector<Check> check_es_averaging();

/// Analytic gradients against central differences at `n_points` random points per objective.
std::vector<Check> check_gradients(std::size_t n_points = 100);

/// Worked theorem examples and monotonicity over a sampled grid.
std::vector<Check> check_theorem_arith();

}  // namespace szo::cli
