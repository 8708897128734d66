#include "szo_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "szo/dataset_io.hpp"
#include "szo/es_sim.hpp"
#include "szo/experiments.hpp"
#include "szo/version.hpp"
#include "szo_cli/verify.hpp"

namespace szo::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Removes everything it created unless commit() was called.
class OutputGuard {
 public:
  explicit OutputGuard(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    if (!fs::exists(dir_, ec)) {
      fs::create_directories(dir_);
      created_dir_ = true;
    } else if (!fs::is_directory(dir_)) {
      throw Error(ErrorKind::io, "output path '" + dir_.string() + "' is not a directory");
    }
  }
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;

  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const fs::path& p : files_) fs::remove(p, ec);
    if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
  }

  void write(const std::string& name, const std::string& contents) {
    const fs::path path = dir_ / name;
    files_.push_back(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
  }

  void commit() { committed_ = true; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
  bool created_dir_ = false;
  bool committed_ = false;
};

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

struct MethodOutcome {
  std::string label;
  std::optional<AggregateStats> agg;
  std::size_t diverged = 0;
  std::uint64_t algorithmic_queries = 0;
  std::uint64_t bookkeeping_queries = 0;
  std::optional<std::int64_t> iters_to_10pct;
};

MethodOutcome summarize(const MethodRuns& runs) {
  MethodOutcome out;
  out.label = runs.spec.label;
  for (const TrialRun& t : runs.trials) {
    out.algorithmic_queries += t.run.algorithmic_queries;
    out.bookkeeping_queries += t.run.bookkeeping_queries;
    if (t.run.diverged) ++out.diverged;
  }
  if (out.diverged < runs.trials.size()) {
    out.agg = aggregate(runs.trials);
    const double initial = out.agg->rows.front().mean_gap;
    out.iters_to_10pct = iterations_to_threshold(*out.agg, 0.1 * initial);
  }
  return out;
}

json certificate_json(const Problem& p) {
  return {{"f_star", p.certificate.f_star},
          {"method", to_string(p.certificate.method)},
          {"residual_grad_norm", p.certificate.residual_grad_norm}};
}

void print_table(const std::vector<MethodOutcome>& rows, std::int64_t T, std::ostream& log) {
  log << std::left << std::setw(18) << "method" << std::right << std::setw(14) << "final_gap" << std::setw(14)
      << "std_gap" << std::setw(9) << "alive" << std::setw(10) << "diverged" << std::setw(12) << "iters_10%"
      << '\n';
  for (const MethodOutcome& r : rows) {
    log << std::left << std::setw(18) << r.label << std::right;
    if (r.agg) {
      log << std::setw(14) << fmt(r.agg->final_row().mean_gap) << std::setw(14) << fmt(r.agg->final_row().std_gap)
          << std::setw(9) << r.agg->final_row().n_alive;
    } else {
      log << std::setw(14) << "-" << std::setw(14) << "-" << std::setw(9) << 0;
    }
    log << std::setw(10) << r.diverged << std::setw(12)
        << (r.iters_to_10pct ? std::to_string(*r.iters_to_10pct) : std::string(">" + std::to_string(T))) << '\n';
  }
}

json base_metadata(const RunConfig& cfg, const ExperimentResult& result, double seconds) {
  json meta;
  meta["tool"] = "szo";
  meta["version"] = SZO_VERSION_STRING;
  meta["case"] = cfg.case_label;
  meta["config"] = to_json(cfg);
  meta["config_hash"] = hex64(config_hash(cfg));
  meta["seeds"] = {{"base_seed", cfg.spec.base_seed},
                   {"dataset_seed", cfg.spec.objective.dataset_seed},
                   {"trial_stream", "derive(derive(base_seed, method_index), trial)"}};
  meta["T"] = cfg.spec.T;
  meta["n_trials"] = cfg.spec.n_trials;
  meta["record_stride"] = cfg.spec.record_stride;
  meta["workers"] = cfg.workers;
  meta["wall_clock_seconds"] = seconds;
  if (result.shared_problem) meta["certificate"] = certificate_json(*result.shared_problem);
  return meta;
}

json method_metadata(const MethodRuns& runs, const MethodOutcome& outcome) {
  json m;
  m["label"] = runs.spec.label;
  m["method"] = std::string(to_string(runs.spec.method));
  m["algorithmic_queries"] = outcome.algorithmic_queries;
  m["bookkeeping_queries"] = outcome.bookkeeping_queries;
  m["diverged_trials"] = outcome.diverged;
  if (outcome.agg) {
    m["final_mean_gap"] = outcome.agg->final_row().mean_gap;
    m["final_std_gap"] = outcome.agg->final_row().std_gap;
  }
  return m;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RunConfig resolve(RunConfig config, const Overrides& o) {
  if (o.out) config.out_dir = *o.out;
  if (o.seed) config.spec.base_seed = *o.seed;
  if (o.workers) config.workers = *o.workers;
  if (o.trials) {
    if (*o.trials < 1) throw Error(ErrorKind::config, "--trials must be >= 1");
    config.spec.n_trials = *o.trials;
  }
  if (o.iters) {
    if (*o.iters < 0) throw Error(ErrorKind::config, "--iters must be >= 0");
    config.spec.T = *o.iters;
  }
  if (config.out_dir.empty()) config.out_dir = (fs::path("runs") / config.case_label).string();
  if (config.workers == 0) config.workers = std::max(1u, std::thread::hardware_concurrency());
  config.spec.workers = config.workers;
  config.spec.validate();
  return config;
}

void cmd_run(const RunConfig& cfg, std::ostream& log) {
  OutputGuard guard(cfg.out_dir);
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_trials(cfg.spec);

  std::ostringstream traces;
  std::ostringstream aggregates;
  std::vector<MethodOutcome> outcomes;
  json methods = json::array();
  bool first = true;
  for (const MethodRuns& runs : result.methods) {
    write_trace_csv(traces, runs, first);
    MethodOutcome outcome = summarize(runs);
    if (outcome.agg) {
      write_aggregate_csv(aggregates, runs.spec.label, *outcome.agg, first);
    } else if (first) {
      aggregates << "method,iter,mean_gap,std_gap,band_lo,band_hi,n_alive\n";
    }
    methods.push_back(method_metadata(runs, outcome));
    outcomes.push_back(std::move(outcome));
    first = false;
  }
  const double seconds = elapsed(start);
  json meta = base_metadata(cfg, result, seconds);
  meta["methods"] = methods;

  guard.write("traces.csv", traces.str());
  guard.write("aggregate.csv", aggregates.str());
  guard.write("metadata.json", meta.dump(2) + "\n");
  guard.commit();

  log << cfg.case_label << ": " << cfg.spec.methods.size() << " methods x " << cfg.spec.n_trials << " trials, T = "
      << cfg.spec.T << " (" << fmt(seconds) << " s)\n";
  print_table(outcomes, cfg.spec.T, log);
  log << "wrote " << cfg.out_dir << "/{traces.csv,aggregate.csv,metadata.json}\n";
  for (const MethodOutcome& o : outcomes) {
    if (!o.agg) log << "warning: every trial of " << o.label << " diverged; no aggregate rows written\n";
  }
}

void cmd_sweep_beta(const RunConfig& cfg, const std::vector<double>& betas, std::ostream& log, std::ostream& warn) {
  if (betas.empty()) throw Error(ErrorKind::config, "beta list is empty");
  for (double b : betas) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw Error(ErrorKind::config, "beta must be non-negative");
    if (!(b > 0.0 && b < 2.0)) {
      warn << "warning: beta = " << format_real(b)
           << " lies outside (0, 2); the update is defined but the convergence guarantee does not apply\n";
    }
  }
  OutputGuard guard(cfg.out_dir);
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream summary;
  summary << "beta,method,final_iter,final_mean_gap,final_std_gap,n_alive,diverged_trials\n";
  json sweeps = json::array();
  std::optional<ExperimentResult> last;
  for (double beta : betas) {
    RunConfig point = cfg;
    for (MethodSpec& m : point.spec.methods) m.hp.beta = beta;
    ExperimentResult result = run_trials(point.spec);
    std::ostringstream aggregates;
    bool first = true;
    std::vector<MethodOutcome> outcomes;
    for (const MethodRuns& runs : result.methods) {
      MethodOutcome outcome = summarize(runs);
      if (outcome.agg) {
        write_aggregate_csv(aggregates, runs.spec.label, *outcome.agg, first);
        const AggregateRow& fin = outcome.agg->final_row();
        summary << format_real(beta) << ',' << runs.spec.label << ',' << fin.iter << ',' << format_real(fin.mean_gap)
                << ',' << format_real(fin.std_gap) << ',' << fin.n_alive << ',' << outcome.diverged << '\n';
      } else {
        if (first) aggregates << "method,iter,mean_gap,std_gap,band_lo,band_hi,n_alive\n";
        summary << format_real(beta) << ',' << runs.spec.label << ",,,,0," << outcome.diverged << '\n';
      }
      sweeps.push_back({{"beta", beta}, {"method", method_metadata(runs, outcome)}});
      outcomes.push_back(std::move(outcome));
      first = false;
    }
    guard.write("aggregate_beta_" + format_real(beta) + ".csv", aggregates.str());
    log << "beta = " << format_real(beta) << '\n';
    print_table(outcomes, cfg.spec.T, log);
    last = std::move(result);
  }
  json meta = base_metadata(cfg, *last, elapsed(start));
  meta["betas"] = betas;
  meta["sweep"] = sweeps;
  guard.write("summary.csv", summary.str());
  guard.write("metadata.json", meta.dump(2) + "\n");
  guard.commit();
  log << "wrote " << betas.size() << " aggregate files, summary.csv and metadata.json to " << cfg.out_dir << '\n';
}

bool cmd_verify(const std::string& suite, std::ostream& out) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = verify_suites();
  } else {
    suites.push_back(suite);
  }
  json reports = json::array();
  bool ok = true;
  for (const std::string& s : suites) {
    const VerifyReport report = run_verify(s);
    ok = ok && report.passed();
    reports.push_back(report.to_json());
  }
  json doc = suites.size() == 1 ? reports[0] : json{{"passed", ok}, {"suites", reports}};
  out << doc.dump(2) << '\n';
  return ok;
}

void cmd_theorem(const TheoremInputs& in, bool as_json, std::ostream& out) {
  const TheoremBounds b = theorem_bounds(in);
  if (as_json) {
    json doc{{"case", std::string(to_string(b.which))},
             {"eta_max", b.eta_max},
             {"eta", b.eta},
             {"r_min", b.r_min},
             {"r_max", b.r_max},
             {"feasible", b.feasible}};
    if (b.bound_leading_term) doc["bound_leading_term"] = *b.bound_leading_term;
    if (!b.feasible) doc["infeasibility"] = b.infeasibility;
    out << doc.dump(2) << '\n';
    return;
  }
  out << "case      " << to_string(b.which) << '\n'
      << "eta_max   " << format_real(b.eta_max) << '\n'
      << "eta       " << format_real(b.eta) << '\n'
      << "r window  [" << format_real(b.r_min) << ", " << format_real(b.r_max) << "]\n";
  if (b.bound_leading_term) out << "bound     " << format_real(*b.bound_leading_term) << '\n';
  out << "feasible  " << (b.feasible ? "yes" : "no (" + b.infeasibility + ")") << '\n';
}

void cmd_dataset_export(const RunConfig& cfg, const fs::path& path, std::ostream& log) {
  const Problem p = build_problem(cfg.spec.objective);
  if (!p.dataset) throw Error(ErrorKind::config, std::string(to_string(cfg.spec.objective.kind)) + " has no dataset");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_dataset(path, *p.dataset);
  log << "wrote " << path.string() << " (f* = " << format_real(p.certificate.f_star) << ")\n";
}

void cmd_es_sim(const EsSimOptions& o, std::ostream& csv) {
  ScalarFunction f;
  if (o.function == "quadratic") {
    f = [](double x) { return x * x; };
  } else if (o.function == "quartic") {
    f = [](double x) { return x * x * x * x; };
  } else {
    throw Error(ErrorKind::invalid_argument, "es-sim function must be quadratic or quartic");
  }
  if (o.steps_per_period < 20) throw Error(ErrorKind::invalid_argument, "steps per period must be >= 20");
  EsParams params;
  params.a = o.a;
  params.omega = o.omega;
  params.omega_H = o.omega_H;
  params.omega_L = o.omega_L;
  params.use_filters = o.filters;
  params.validate();
  const double dt = 2.0 * M_PI / o.omega / static_cast<double>(o.steps_per_period);
  const EsTrajectory traj = integrate_es(o.x0, params, f, o.horizon, dt, o.sample_every);
  write_es_trajectory_csv(csv, traj, f, 0.0);
  if (traj.diverged) throw Error(ErrorKind::solver_failure, "extremum-seeking trajectory diverged");
}

}  // namespace szo::cli
