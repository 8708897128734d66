#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "szo/core.hpp"
#include "szo/rng.hpp"
#include "szo/sampling.hpp"

namespace szo {

/// Update rules. The string forms are stable identifiers used in configs and CSV.
enum class Method { vanilla_szo, two_point_sym, two_point_fwd, hf_szo, lf_szo, hlf_szo, filter_form };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();

/// Oracle queries one iteration costs (excluding the optional two-query first step).
std::uint64_t queries_per_step(Method method);
bool is_single_point(Method method);

/// How the high-pass state starts (ignored by vanilla, LF and two-point rules).
///  - first_query: z_0 = f(x_0 + r u_0) and step 0 moves the iterate like vanilla SZO.
///  - first_query_hold: z_0 = f(x_0 + r u_0) but x_1 = x_0; step 0 only seeds the
///    filter. Avoids the large first kick eta (d/r) f(x_0 + r u_0).
///  - symmetric_pair: z_0 = (f(x_0 + r u_0) - f(x_0 - r u_0)) / 2, two queries on step 0.
/// The first two keep every iteration at exactly one query.
enum class ZInit { first_query, first_query_hold, symmetric_pair };

std::string_view to_string(ZInit init);
ZInit parse_z_init(std::string_view name);

struct SzoHyperparams {
  double eta = 0.0;    // step size
  double r = 0.1;      // smoothing radius
  double alpha = 0.0;  // low-pass / momentum, in [0, 1]
  double beta = 0.0;   // high-pass, >= 0
  ZInit z_init = ZInit::first_query;

  /// Throws ErrorKind::invalid_argument naming the offending field.
  void validate() const;

  bool operator==(const SzoHyperparams&) const = default;
};

/// Supplies u_k: drawn from an owned RngStream, or replayed from a fixed list
/// (the list must cover every step it is asked for).
class DirectionSource {
 public:
  explicit DirectionSource(RngStream rng) : rng_(rng) {}
  explicit DirectionSource(std::vector<DenseVector> forced);

  SphereSample next(std::size_t d);
  std::size_t drawn() const { return drawn_; }

 private:
  std::optional<RngStream> rng_;
  std::vector<SphereSample> forced_;
  std::size_t drawn_ = 0;
};

/// Iterate plus the single-point filter memory. f_prev and z_prev start at 0,
/// which makes the first high-pass output equal the first query.
struct HlfState {
  DenseVector x;
  DenseVector x_prev;
  double z_prev = 0.0;
  double f_prev = 0.0;
  std::int64_t k = 0;
  bool diverged = false;

  static HlfState start(const DenseVector& x0);
};

// Each stepper advances `state` by one iteration. A non-finite query or iterate
// sets state.diverged and leaves the iterate untouched.
void step_vanilla(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp, DirectionSource& dirs);
void step_two_point_symmetric(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp,
                              DirectionSource& dirs);
void step_two_point_forward(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp,
                            DirectionSource& dirs);
void step_hf(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp, DirectionSource& dirs);
void step_lf(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp, DirectionSource& dirs);
void step_hlf(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp, DirectionSource& dirs);

/// Filter cut-offs and time step of the discretized extremum-seeking loop.
struct FilterParams {
  double delta = 0.1;
  double omega_H = 0.0;
  double omega_L = 1.0;
  double r = 0.1;
  ZInit z_init = ZInit::first_query;

  /// Requires delta > 0, omega_H >= 0, omega_L > 0, delta * omega_L <= 1, r > 0.
  void validate() const;
};

/// beta = delta * omega_H, eta = delta^2 * omega_L, alpha = 1 - delta * omega_L.
SzoHyperparams params_from_discretization(const FilterParams& fp);

/// Inverse of params_from_discretization; needs alpha < 1 and eta > 0.
FilterParams discretization_from_params(const SzoHyperparams& hp);

/// High-pass output z, low-pass output y and the iterate, as separate states.
struct FilterFormState {
  DenseVector x;
  DenseVector y;
  double z_prev = 0.0;
  double f_prev = 0.0;
  std::int64_t k = 0;
  bool diverged = false;

  static FilterFormState start(const DenseVector& x0);
};

/// z_k = (1 - delta w_H) z_{k-1} + f_k - f_{k-1};  y_{k+1} = (1 - delta w_L) y_k + delta w_L g_k;
/// x_{k+1} = x_k - delta y_{k+1}, with g_k = (d/r) z_k u_k.
void step_filter_form(FilterFormState& state, ObjectiveOracle& oracle, const FilterParams& fp,
                      DirectionSource& dirs);

struct RunOptions {
  std::int64_t record_stride = 1;
  /// Store iterates in the trace; defaults to dim <= 10.
  std::optional<bool> store_x;
  double divergence_threshold = 1e12;
};

struct RunResult {
  Trace trace;
  bool diverged = false;
  /// Steps executed, including the one that diverged.
  std::int64_t steps = 0;
  std::uint64_t algorithmic_queries = 0;
  /// Unperturbed f(x_k) evaluations made only for the trace.
  std::uint64_t bookkeeping_queries = 0;
  DenseVector final_x;
};

/// Runs T iterations, recording f(x_k) at iteration 0, every record_stride
/// iterations, and at T. Records carry the algorithmic query count. On
/// divergence (non-finite values or |f| above the threshold) the trace stops
/// at the last healthy record and `diverged` is set.
RunResult run_optimizer(Method method, ObjectiveOracle& oracle, const DenseVector& x0, std::int64_t T,
                        const SzoHyperparams& hp, DirectionSource& dirs, const RunOptions& options = {});

}  // namespace szo
