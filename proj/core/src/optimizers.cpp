#include "szo/optimizers.hpp"

#include <array>
#include <cmath>
#include <string>

namespace szo {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 7> kMethodNames{{
    {Method::vanilla_szo, "vanilla_szo"},
    {Method::two_point_sym, "two_point_sym"},
    {Method::two_point_fwd, "two_point_fwd"},
    {Method::hf_szo, "hf_szo"},
    {Method::lf_szo, "lf_szo"},
    {Method::hlf_szo, "hlf_szo"},
    {Method::filter_form, "filter_form"},
}};

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

// x - eta (d/r) z u. Every single-point rule shares this exact expression so
// that the reduction identities hold bit for bit.
DenseVector descend(const DenseVector& x, double eta, double r, double z, const DenseVector& u) {
  const double d = static_cast<double>(x.size());
  const double scale = eta * (d / r) * z;
  return x - scale * u;
}

// High-pass recursion z_k = (1 - beta) z_{k-1} + f_k - f_{k-1}, grouped as
// f_k minus the filter's running baseline. With beta = 0 and z_{k-1} == f_{k-1}
// the baseline is exactly zero, so z_k == f_k with no rounding.
double high_pass(double f, double f_prev, double z_prev, double beta) {
  return f - (f_prev - (1.0 - beta) * z_prev);
}

struct Query {
  double value = 0.0;
  bool ok = false;
};

Query query(ObjectiveOracle& oracle, const DenseVector& point) {
  try {
    return {oracle.eval(point), true};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::non_finite) throw;
    return {};
  }
}

void commit(HlfState& state, DenseVector next, double z, double f) {
  if (!next.allFinite()) {
    state.diverged = true;
    return;
  }
  state.x_prev = std::move(state.x);
  state.x = std::move(next);
  state.z_prev = z;
  state.f_prev = f;
  ++state.k;
}

// Shared body of the four single-point rules.
void single_point_step(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp, DirectionSource& dirs,
                       bool high_pass_on, bool momentum_on) {
  if (state.diverged) return;
  const SphereSample u = dirs.next(state.x.size());
  const Query plus = query(oracle, state.x + hp.r * u.u());
  if (!plus.ok) {
    state.diverged = true;
    return;
  }
  double z = plus.value;
  if (high_pass_on) {
    if (state.k == 0 && hp.z_init == ZInit::symmetric_pair) {
      const Query minus = query(oracle, state.x - hp.r * u.u());
      if (!minus.ok) {
        state.diverged = true;
        return;
      }
      z = 0.5 * (plus.value - minus.value);
    } else {
      z = high_pass(plus.value, state.f_prev, state.z_prev, hp.beta);
    }
  }
  if (high_pass_on && state.k == 0 && hp.z_init == ZInit::first_query_hold) {
    commit(state, state.x, z, plus.value);
    return;
  }
  DenseVector next = descend(state.x, hp.eta, hp.r, z, u.u());
  if (momentum_on) next += hp.alpha * (state.x - state.x_prev);
  commit(state, std::move(next), z, plus.value);
}

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  throw Error(ErrorKind::invalid_argument, "unknown method '" + std::string(name) + "'");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> v;
    for (const auto& entry : kMethodNames) v.push_back(entry.first);
    return v;
  }();
  return methods;
}

std::uint64_t queries_per_step(Method method) { return is_single_point(method) ? 1 : 2; }

bool is_single_point(Method method) {
  return method != Method::two_point_sym && method != Method::two_point_fwd;
}

std::string_view to_string(ZInit init) {
  switch (init) {
    case ZInit::first_query: return "first_query";
    case ZInit::first_query_hold: return "first_query_hold";
    case ZInit::symmetric_pair: return "symmetric_pair";
  }
  return "unknown";
}

ZInit parse_z_init(std::string_view name) {
  if (name == "first_query") return ZInit::first_query;
  if (name == "first_query_hold") return ZInit::first_query_hold;
  if (name == "symmetric_pair") return ZInit::symmetric_pair;
  throw Error(ErrorKind::invalid_argument, "unknown z_init '" + std::string(name) + "'");
}

void SzoHyperparams::validate() const {
  if (!finite_positive(eta)) throw Error(ErrorKind::invalid_argument, "eta must be positive");
  if (!finite_positive(r)) throw Error(ErrorKind::invalid_argument, "r must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::invalid_argument, "alpha must lie in [0, 1]");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::invalid_argument, "beta must be non-negative");
}

DirectionSource::DirectionSource(std::vector<DenseVector> forced) {
  forced_.reserve(forced.size());
  for (auto& u : forced) forced_.push_back(SphereSample::from_unit(std::move(u)));
}

SphereSample DirectionSource::next(std::size_t d) {
  if (rng_) {
    ++drawn_;
    return sample_sphere(*rng_, d);
  }
  if (drawn_ >= forced_.size()) {
    throw Error(ErrorKind::invalid_argument, "forced direction sequence exhausted after " +
                                                 std::to_string(forced_.size()) + " steps");
  }
  const SphereSample& u = forced_[drawn_++];
  if (u.dim() != d) throw Error(ErrorKind::dimension_mismatch, "forced direction has wrong dimension");
  return u;
}

HlfState HlfState::start(const DenseVector& x0) {
  require_finite(x0, "x0");
  HlfState s;
  s.x = x0;
  s.x_prev = x0;
  return s;
}

void step_vanilla(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp, DirectionSource& dirs) {
  single_point_step(state, oracle, hp, dirs, false, false);
}

void step_hf(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp, DirectionSource& dirs) {
  single_point_step(state, oracle, hp, dirs, true, false);
}

void step_lf(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp, DirectionSource& dirs) {
  single_point_step(state, oracle, hp, dirs, false, true);
}

void step_hlf(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp, DirectionSource& dirs) {
  single_point_step(state, oracle, hp, dirs, true, true);
}

void step_two_point_symmetric(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp,
                              DirectionSource& dirs) {
  if (state.diverged) return;
  const SphereSample u = dirs.next(state.x.size());
  const Query plus = query(oracle, state.x + hp.r * u.u());
  const Query minus = plus.ok ? query(oracle, state.x - hp.r * u.u()) : Query{};
  if (!minus.ok) {
    state.diverged = true;
    return;
  }
  const double z = 0.5 * (plus.value - minus.value);
  commit(state, descend(state.x, hp.eta, hp.r, z, u.u()), z, plus.value);
}

void step_two_point_forward(HlfState& state, ObjectiveOracle& oracle, const SzoHyperparams& hp,
                            DirectionSource& dirs) {
  if (state.diverged) return;
  const SphereSample u = dirs.next(state.x.size());
  const Query plus = query(oracle, state.x + hp.r * u.u());
  const Query centre = plus.ok ? query(oracle, state.x) : Query{};
  if (!centre.ok) {
    state.diverged = true;
    return;
  }
  const double z = plus.value - centre.value;
  commit(state, descend(state.x, hp.eta, hp.r, z, u.u()), z, plus.value);
}

void FilterParams::validate() const {
  if (!finite_positive(delta)) throw Error(ErrorKind::invalid_argument, "delta must be positive");
  if (!(omega_H >= 0.0) || !std::isfinite(omega_H)) {
    throw Error(ErrorKind::invalid_argument, "omega_H must be non-negative");
  }
  if (!finite_positive(omega_L)) throw Error(ErrorKind::invalid_argument, "omega_L must be positive");
  if (delta * omega_L > 1.0) {
    throw Error(ErrorKind::infeasible, "delta * omega_L = " + std::to_string(delta * omega_L) +
                                           " exceeds 1, which would make alpha negative");
  }
  if (!finite_positive(r)) throw Error(ErrorKind::invalid_argument, "r must be positive");
}

SzoHyperparams params_from_discretization(const FilterParams& fp) {
  fp.validate();
  SzoHyperparams hp;
  hp.beta = fp.delta * fp.omega_H;
  hp.eta = fp.delta * fp.delta * fp.omega_L;
  hp.alpha = 1.0 - fp.delta * fp.omega_L;
  hp.r = fp.r;
  hp.z_init = fp.z_init;
  return hp;
}

FilterParams discretization_from_params(const SzoHyperparams& hp) {
  hp.validate();
  if (!(hp.alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha = 1 has no filter-form counterpart (omega_L would be 0)");
  }
  FilterParams fp;
  fp.delta = hp.eta / (1.0 - hp.alpha);
  fp.omega_L = (1.0 - hp.alpha) / fp.delta;
  fp.omega_H = hp.beta / fp.delta;
  fp.r = hp.r;
  fp.z_init = hp.z_init;
  return fp;
}

FilterFormState FilterFormState::start(const DenseVector& x0) {
  require_finite(x0, "x0");
  FilterFormState s;
  s.x = x0;
  s.y = DenseVector::Zero(x0.size());
  return s;
}

void step_filter_form(FilterFormState& state, ObjectiveOracle& oracle, const FilterParams& fp,
                      DirectionSource& dirs) {
  if (state.diverged) return;
  const SphereSample u = dirs.next(state.x.size());
  const Query plus = query(oracle, state.x + fp.r * u.u());
  if (!plus.ok) {
    state.diverged = true;
    return;
  }
  double z = 0.0;
  if (state.k == 0 && fp.z_init == ZInit::symmetric_pair) {
    const Query minus = query(oracle, state.x - fp.r * u.u());
    if (!minus.ok) {
      state.diverged = true;
      return;
    }
    z = 0.5 * (plus.value - minus.value);
  } else {
    z = high_pass(plus.value, state.f_prev, state.z_prev, fp.delta * fp.omega_H);
  }
  if (state.k == 0 && fp.z_init == ZInit::first_query_hold) {
    state.z_prev = z;
    state.f_prev = plus.value;
    ++state.k;
    return;
  }
  const double d = static_cast<double>(state.x.size());
  const DenseVector g = (d / fp.r * z) * u.u();
  const double keep = 1.0 - fp.delta * fp.omega_L;
  DenseVector y = keep * state.y + (fp.delta * fp.omega_L) * g;
  DenseVector x = state.x - fp.delta * y;
  if (!x.allFinite() || !y.allFinite()) {
    state.diverged = true;
    return;
  }
  state.x = std::move(x);
  state.y = std::move(y);
  state.z_prev = z;
  state.f_prev = plus.value;
  ++state.k;
}

RunResult run_optimizer(Method method, ObjectiveOracle& oracle, const DenseVector& x0, std::int64_t T,
                        const SzoHyperparams& hp, DirectionSource& dirs, const RunOptions& options) {
  hp.validate();
  require_dim(x0, oracle.dim(), "x0");
  if (T < 0) throw Error(ErrorKind::invalid_argument, "iteration count must be non-negative");
  if (options.record_stride < 1) throw Error(ErrorKind::invalid_argument, "record_stride must be >= 1");

  const bool store_x = options.store_x.value_or(oracle.dim() <= 10);
  RunResult result;
  result.trace = Trace(store_x);
  ObjectiveOracle bookkeeping(oracle.shared_objective());
  const std::uint64_t base_queries = oracle.query_count();

  HlfState state = HlfState::start(x0);
  FilterFormState filter_state;
  FilterParams fp;
  if (method == Method::filter_form) {
    fp = discretization_from_params(hp);
    filter_state = FilterFormState::start(x0);
  }

  auto current_x = [&]() -> const DenseVector& {
    return method == Method::filter_form ? filter_state.x : state.x;
  };
  auto diverged = [&] { return method == Method::filter_form ? filter_state.diverged : state.diverged; };
  auto last_query = [&] { return method == Method::filter_form ? filter_state.f_prev : state.f_prev; };

  // Returns false when the iterate has left the healthy region.
  auto record = [&](std::int64_t iter) {
    const Query f = query(bookkeeping, current_x());
    if (!f.ok || std::abs(f.value) > options.divergence_threshold) return false;
    result.trace.record(iter, current_x(), f.value, oracle.query_count() - base_queries);
    return true;
  };

  bool healthy = record(0);
  for (std::int64_t k = 1; healthy && k <= T; ++k) {
    switch (method) {
      case Method::vanilla_szo: step_vanilla(state, oracle, hp, dirs); break;
      case Method::two_point_sym: step_two_point_symmetric(state, oracle, hp, dirs); break;
      case Method::two_point_fwd: step_two_point_forward(state, oracle, hp, dirs); break;
      case Method::hf_szo: step_hf(state, oracle, hp, dirs); break;
      case Method::lf_szo: step_lf(state, oracle, hp, dirs); break;
      case Method::hlf_szo: step_hlf(state, oracle, hp, dirs); break;
      case Method::filter_form: step_filter_form(filter_state, oracle, fp, dirs); break;
    }
    result.steps = k;
    if (diverged() || std::abs(last_query()) > options.divergence_threshold) {
      healthy = false;
      break;
    }
    if (k % options.record_stride == 0 || k == T) healthy = record(k);
  }

  result.diverged = !healthy;
  result.algorithmic_queries = oracle.query_count() - base_queries;
  result.bookkeeping_queries = bookkeeping.query_count();
  result.final_x = current_x();
  return result;
}

}  // namespace szo
