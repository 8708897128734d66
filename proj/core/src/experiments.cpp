#include "szo/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

namespace szo {

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::logistic: return "logistic";
    case ObjectiveKind::ridge: return "ridge";
    case ObjectiveKind::beale: return "beale";
    case ObjectiveKind::matyas: return "matyas";
  }
  return "unknown";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
  if (name == "logistic") return ObjectiveKind::logistic;
  if (name == "ridge") return ObjectiveKind::ridge;
  if (name == "beale") return ObjectiveKind::beale;
  if (name == "matyas") return ObjectiveKind::matyas;
  throw Error(ErrorKind::invalid_argument, "unknown objective '" + std::string(name) + "'");
}

bool ObjectiveSpec::operator==(const ObjectiveSpec& o) const {
  const bool same_x = x_star.size() == o.x_star.size() && x_star == o.x_star;
  return kind == o.kind && d == o.d && n_rows == o.n_rows && same_x && dataset_seed == o.dataset_seed &&
         c == o.c && noise_std == o.noise_std && dataset_file == o.dataset_file;
}

void ExperimentSpec::validate() const {
  if (methods.empty()) throw Error(ErrorKind::invalid_argument, "experiment has no methods");
  for (const auto& m : methods) m.hp.validate();
  if (n_trials < 1) throw Error(ErrorKind::invalid_argument, "n_trials must be >= 1");
  if (record_stride < 1) throw Error(ErrorKind::invalid_argument, "record_stride must be >= 1");
  if (T < 0) throw Error(ErrorKind::invalid_argument, "T must be non-negative");
  require_dim(x0, objective.d, "x0");
  require_finite(x0, "x0");
}

Problem build_problem(const ObjectiveSpec& spec) { return build_problem(spec, spec.dataset_seed); }

Problem build_problem(const ObjectiveSpec& spec, std::uint64_t dataset_seed) {
  Problem p;
  switch (spec.kind) {
    case ObjectiveKind::logistic:
    case ObjectiveKind::ridge: {
      Dataset data;
      if (spec.dataset_file) {
        data = load_dataset(*spec.dataset_file);
      } else {
        RngStream rng(dataset_seed);
        if (spec.kind == ObjectiveKind::logistic) {
          data = gen_logistic(spec.d, spec.n_rows, spec.x_star, rng);
        } else {
          data = gen_ridge(spec.d, spec.n_rows, spec.x_star, spec.c, spec.noise_std, rng);
        }
      }
      if (spec.kind == ObjectiveKind::logistic) {
        auto* ds = std::get_if<LogisticDataset>(&data);
        if (ds == nullptr) throw Error(ErrorKind::config, "dataset file is not a logistic dataset");
        if (ds->dim() != spec.d) throw Error(ErrorKind::dimension_mismatch, "dataset dimension differs from d");
        p.objective = std::make_shared<LogisticObjective>(std::make_shared<const LogisticDataset>(*ds));
      } else {
        auto* ds = std::get_if<RidgeDataset>(&data);
        if (ds == nullptr) throw Error(ErrorKind::config, "dataset file is not a ridge dataset");
        if (ds->dim() != spec.d) throw Error(ErrorKind::dimension_mismatch, "dataset dimension differs from d");
        p.objective = std::make_shared<RidgeObjective>(std::make_shared<const RidgeDataset>(*ds));
      }
      p.dataset = std::move(data);
      break;
    }
    case ObjectiveKind::beale:
      if (spec.d != 2) throw Error(ErrorKind::dimension_mismatch, "beale is two-dimensional");
      p.objective = std::make_shared<BealeObjective>();
      break;
    case ObjectiveKind::matyas:
      if (spec.d != 2) throw Error(ErrorKind::dimension_mismatch, "matyas is two-dimensional");
      p.objective = std::make_shared<MatyasObjective>();
      break;
  }
  p.certificate = solve_optimum(*p.objective);
  return p;
}

RngStream trial_stream(std::uint64_t base_seed, std::size_t method_index, std::size_t trial) {
  return derive(derive(RngStream(base_seed), method_index), trial);
}

ExperimentResult run_trials(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;

  std::vector<Problem> per_trial;
  if (spec.shared_dataset) {
    result.shared_problem = build_problem(spec.objective);
  } else {
    per_trial.reserve(spec.n_trials);
    const RngStream root(spec.objective.dataset_seed);
    for (std::size_t i = 0; i < spec.n_trials; ++i) {
      per_trial.push_back(build_problem(spec.objective, derive(root, i).seed()));
    }
  }
  auto problem_for = [&](std::size_t trial) -> const Problem& {
    return spec.shared_dataset ? *result.shared_problem : per_trial[trial];
  };

  result.methods.resize(spec.methods.size());
  for (std::size_t m = 0; m < spec.methods.size(); ++m) {
    result.methods[m].spec = spec.methods[m];
    if (result.methods[m].spec.label.empty()) {
      result.methods[m].spec.label = std::string(to_string(spec.methods[m].method));
    }
    result.methods[m].trials.resize(spec.n_trials);
  }

  const std::size_t total = spec.methods.size() * spec.n_trials;
  std::atomic<std::size_t> next{0};
  RunOptions options;
  options.record_stride = spec.record_stride;

  auto worker = [&]() {
    for (std::size_t job = next.fetch_add(1); job < total; job = next.fetch_add(1)) {
      const std::size_t m = job / spec.n_trials;
      const std::size_t i = job % spec.n_trials;
      const Problem& problem = problem_for(i);
      ObjectiveOracle oracle(problem.objective);
      DirectionSource dirs(trial_stream(spec.base_seed, m, i));
      TrialRun& slot = result.methods[m].trials[i];
      slot.trial = i;
      slot.f_star = problem.certificate.f_star;
      slot.run = run_optimizer(spec.methods[m].method, oracle, spec.x0, spec.T, spec.methods[m].hp, dirs, options);
    }
  };

  const std::size_t n_workers = std::clamp<std::size_t>(spec.workers, 1, std::max<std::size_t>(total, 1));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  return result;
}

const AggregateRow& AggregateStats::at_iter(std::int64_t iter) const {
  auto it = std::lower_bound(rows.begin(), rows.end(), iter,
                             [](const AggregateRow& row, std::int64_t v) { return row.iter < v; });
  if (it == rows.end() || it->iter != iter) {
    throw Error(ErrorKind::invalid_argument, "no aggregate record at iteration " + std::to_string(iter));
  }
  return *it;
}

namespace {

AggregateStats aggregate_impl(const std::vector<const Trace*>& alive, const std::vector<double>& f_stars,
                              std::size_t diverged) {
  if (alive.empty()) throw Error(ErrorKind::invalid_argument, "every trial diverged; nothing to aggregate");
  const Trace& ref = *alive.front();
  for (const Trace* t : alive) {
    if (t->size() != ref.size()) throw Error(ErrorKind::invalid_argument, "traces do not share a recording grid");
    for (std::size_t k = 0; k < t->size(); ++k) {
      if (t->records()[k].iter != ref.records()[k].iter) {
        throw Error(ErrorKind::invalid_argument, "traces do not share a recording grid");
      }
    }
  }
  AggregateStats agg;
  agg.diverged_trial_count = diverged;
  agg.rows.reserve(ref.size());
  std::vector<double> gaps(alive.size());
  for (std::size_t k = 0; k < ref.size(); ++k) {
    for (std::size_t i = 0; i < alive.size(); ++i) gaps[i] = alive[i]->records()[k].f_x - f_stars[i];
    std::sort(gaps.begin(), gaps.end());
    const double n = static_cast<double>(gaps.size());
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / n;
    double ss = 0.0;
    for (double g : gaps) ss += (g - mean) * (g - mean);
    const double sd = gaps.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    agg.rows.push_back({ref.records()[k].iter, mean, sd, mean - 3.0 * sd, mean + 3.0 * sd, gaps.size()});
  }
  return agg;
}

}  // namespace

AggregateStats aggregate(const std::vector<TrialRun>& trials) {
  std::vector<const Trace*> alive;
  std::vector<double> f_stars;
  std::size_t diverged = 0;
  for (const TrialRun& t : trials) {
    if (t.run.diverged) {
      ++diverged;
      continue;
    }
    alive.push_back(&t.run.trace);
    f_stars.push_back(t.f_star);
  }
  return aggregate_impl(alive, f_stars, diverged);
}

AggregateStats aggregate(const std::vector<Trace>& traces, const std::vector<bool>& diverged, double f_star) {
  if (diverged.size() != traces.size()) {
    throw Error(ErrorKind::dimension_mismatch, "diverged flags must match traces");
  }
  std::vector<const Trace*> alive;
  std::size_t n_diverged = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (diverged[i]) {
      ++n_diverged;
    } else {
      alive.push_back(&traces[i]);
    }
  }
  return aggregate_impl(alive, std::vector<double>(alive.size(), f_star), n_diverged);
}

std::optional<std::int64_t> iterations_to_threshold(const AggregateStats& agg, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::invalid_argument, "threshold must be positive");
  for (const auto& row : agg.rows) {
    if (row.mean_gap <= eps) return row.iter;
  }
  return std::nullopt;
}

double rate_slope(const AggregateStats& agg, std::int64_t first_iter, std::int64_t last_iter) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& row : agg.rows) {
    if (row.iter < first_iter || row.iter > last_iter) continue;
    if (row.iter < 1 || !(row.mean_gap > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "rate window needs iter >= 1 and positive gaps");
    }
    lx.push_back(std::log(static_cast<double>(row.iter)));
    ly.push_back(std::log(row.mean_gap));
  }
  if (lx.size() < 2) throw Error(ErrorKind::invalid_argument, "rate window holds fewer than two records");
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

double variance_ratio(const AggregateStats& a, const AggregateStats& b, std::int64_t iter) {
  const double sb = b.at_iter(iter).std_gap;
  if (sb == 0.0) throw Error(ErrorKind::invalid_argument, "reference std is zero");
  return a.at_iter(iter).std_gap / sb;
}

void write_trace_csv(std::ostream& os, const MethodRuns& runs, bool header) {
  if (header) os << "method,trial,iter,f_value,gap,queries\n";
  for (const TrialRun& t : runs.trials) {
    for (const TraceRecord& rec : t.run.trace.records()) {
      os << runs.spec.label << ',' << t.trial << ',' << rec.iter << ',' << format_real(rec.f_x) << ','
         << format_real(rec.f_x - t.f_star) << ',' << rec.queries << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& os, const std::string& label, const AggregateStats& agg, bool header) {
  if (header) os << "method,iter,mean_gap,std_gap,band_lo,band_hi,n_alive\n";
  for (const AggregateRow& row : agg.rows) {
    os << label << ',' << row.iter << ',' << format_real(row.mean_gap) << ',' << format_real(row.std_gap) << ','
       << format_real(row.band_lo) << ',' << format_real(row.band_hi) << ',' << row.n_alive << '\n';
  }
}

}  // namespace szo
