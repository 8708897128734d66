#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "szo/core.hpp"
#include "szo/dataset_io.hpp"
#include "szo/objectives.hpp"
#include "szo/optimizers.hpp"

namespace szo {

enum class ObjectiveKind { logistic, ridge, beale, matyas };

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind parse_objective_kind(std::string_view name);

/// Which benchmark problem to build and how to generate its data.
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::matyas;
  std::size_t d = 2;
  std::size_t n_rows = 0;  // regression only
  DenseVector x_star;      // regression data generator truth
  std::uint64_t dataset_seed = 0;
  double c = 0.1;          // ridge
  double noise_std = 0.0;  // ridge
  std::optional<std::string> dataset_file;  // import instead of generating

  bool operator==(const ObjectiveSpec& other) const;
};

struct MethodSpec {
  Method method = Method::hlf_szo;
  std::string label;  // CSV identifier; defaults to the method id
  SzoHyperparams hp;

  bool operator==(const MethodSpec&) const = default;
};

struct ExperimentSpec {
  ObjectiveSpec objective;
  std::vector<MethodSpec> methods;
  std::int64_t T = 1000;
  std::size_t n_trials = 1;
  std::uint64_t base_seed = 0;
  DenseVector x0;
  std::int64_t record_stride = 1;
  /// Generate the regression dataset once per experiment (true) or once per trial.
  bool shared_dataset = true;
  std::size_t workers = 1;

  void validate() const;
};

/// Objective instance with its certified optimum.
struct Problem {
  std::shared_ptr<const SmoothObjective> objective;
  OptimumCertificate certificate;
  std::optional<Dataset> dataset;
};

/// Generates (or loads) the dataset with the given seed and certifies its optimum.
Problem build_problem(const ObjectiveSpec& spec, std::uint64_t dataset_seed);
Problem build_problem(const ObjectiveSpec& spec);

struct TrialRun {
  std::size_t trial = 0;
  RunResult run;
  double f_star = 0.0;
};

struct MethodRuns {
  MethodSpec spec;
  std::vector<TrialRun> trials;
};

struct ExperimentResult {
  std::optional<Problem> shared_problem;
  std::vector<MethodRuns> methods;
};

/// Seed of trial `trial` of the method at position `method_index`.
RngStream trial_stream(std::uint64_t base_seed, std::size_t method_index, std::size_t trial);

/// Runs every (method, trial) pair on a worker pool. Results are laid out by
/// (method, trial) regardless of scheduling, so output is deterministic.
ExperimentResult run_trials(const ExperimentSpec& spec);

struct AggregateRow {
  std::int64_t iter = 0;
  double mean_gap = 0.0;
  double std_gap = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  std::size_t n_alive = 0;
};

struct AggregateStats {
  std::vector<AggregateRow> rows;
  std::size_t diverged_trial_count = 0;

  const AggregateRow& at_iter(std::int64_t iter) const;
  const AggregateRow& final_row() const { return rows.back(); }
};

/// Mean and sample std (n - 1) of f(x_k) - f* over non-diverged trials, with a
/// band of mean +/- 3 std. Values are sorted before summation, so trial order
/// does not affect a single bit of the result.
AggregateStats aggregate(const std::vector<TrialRun>& trials);
AggregateStats aggregate(const std::vector<Trace>& traces, const std::vector<bool>& diverged, double f_star);

/// First recorded iteration whose mean gap is <= eps.
std::optional<std::int64_t> iterations_to_threshold(const AggregateStats& agg, double eps);

/// Least-squares slope of log(mean_gap) against log(iter) over records with
/// iter in [first_iter, last_iter]; iter must be >= 1 and gaps positive.
double rate_slope(const AggregateStats& agg, std::int64_t first_iter, std::int64_t last_iter);

/// std_a / std_b at the record with the given iteration.
double variance_ratio(const AggregateStats& a, const AggregateStats& b, std::int64_t iter);

/// `method,trial,iter,f_value,gap,queries`
void write_trace_csv(std::ostream& os, const MethodRuns& runs, bool header = true);
/// `method,iter,mean_gap,std_gap,band_lo,band_hi,n_alive`
void write_aggregate_csv(std::ostream& os, const std::string& label, const AggregateStats& agg,
                         bool header = true);

}  // namespace szo
