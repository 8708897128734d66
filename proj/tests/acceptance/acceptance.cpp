// Acceptance suite: one PASS/FAIL line per criterion, followed by its measurements.
//
//   szo_acceptance [--known-red AC8] [--only AC6]
//
// The exit status is non-zero when a criterion fails that was not declared
// known-red. Known-red criteria still print FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "szo/experiments.hpp"
#include "szo_cli/commands.hpp"
#include "szo_cli/config.hpp"
#include "szo_cli/verify.hpp"

using namespace szo;
using namespace szo::cli;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::vector<std::string> details;
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string iters(const std::optional<std::int64_t>& it) { return it ? std::to_string(*it) : "never"; }

RunConfig canned(const std::string& name) {
  return resolve(load_config(std::string(SZO_CONFIG_DIR) + "/" + name + ".json"), Overrides{});
}

Outcome from_checks(const std::vector<Check>& checks) {
  Outcome o;
  o.passed = !checks.empty();
  for (const Check& c : checks) {
    o.passed = o.passed && c.passed;
    o.details.push_back(std::string(c.passed ? "ok   " : "FAIL ") + c.name + (c.detail.empty() ? "" : ": " + c.detail));
  }
  return o;
}

const MethodRuns& by_label(const ExperimentResult& r, const std::string& label) {
  for (const MethodRuns& m : r.methods) {
    if (m.spec.label == label) return m;
  }
  throw Error(ErrorKind::config, "method label '" + label + "' not in config");
}

std::optional<std::int64_t> to_tenth(const AggregateStats& agg) {
  return iterations_to_threshold(agg, 0.1 * agg.rows.front().mean_gap);
}

bool before(const std::optional<std::int64_t>& a, const std::optional<std::int64_t>& b) {
  return a && (!b || *a < *b);
}

// Queries the method should have spent over `steps` iterations.
std::uint64_t expected_queries(const MethodSpec& m, std::int64_t steps) {
  const bool high_pass = m.method == Method::hf_szo || m.method == Method::hlf_szo || m.method == Method::filter_form;
  const std::uint64_t pair_start = high_pass && m.hp.z_init == ZInit::symmetric_pair && steps > 0 ? 1 : 0;
  return queries_per_step(m.method) * static_cast<std::uint64_t>(steps) + pair_start;
}

Outcome ac5_query_accounting() {
  Outcome o;
  o.passed = true;
  const char* cases[] = {"case_1_1a", "case_1_1b", "case_1_2a", "case_1_2b",        "case_1_2b_scaled",
                         "case_2_1a", "case_2_1b", "case_2_2a", "case_2_2b"};
  std::size_t diverged = 0;
  for (const char* name : cases) {
    const RunConfig cfg = canned(name);
    RunConfig one = cfg;
    one.spec.n_trials = 2;
    const ExperimentResult r = run_trials(one.spec);
    std::string line = std::string(name) + ": T=" + std::to_string(cfg.spec.T);
    for (const MethodRuns& m : r.methods) {
      line += " " + m.spec.label + "=";
      for (const TrialRun& t : m.trials) {
        // A diverged run stops early by contract; its count must match the steps it executed.
        const bool ok = t.run.algorithmic_queries == expected_queries(m.spec, t.run.steps) &&
                        (t.run.diverged || t.run.steps == cfg.spec.T);
        o.passed = o.passed && ok;
        if (t.run.diverged) ++diverged;
        line += std::to_string(t.run.algorithmic_queries) + (ok ? "" : "(!)") +
                (t.run.diverged ? "(diverged at step " + std::to_string(t.run.steps) + ")" : "") +
                (&t == &m.trials.back() ? "" : "/");
      }
    }
    o.details.push_back(line);
  }
  o.details.push_back("2 trials per method; queries equal per-step cost x steps executed in every run, " +
                      std::to_string(diverged) + " runs diverged before T");
  return o;
}

Outcome ac6_variance_reduction() {
  const RunConfig cfg = canned("case_1_1a");
  const ExperimentResult r = run_trials(cfg.spec);
  auto final_std = [&](const char* label) { return aggregate(by_label(r, label).trials).final_row().std_gap; };
  const double van = final_std("vanilla");
  const double lf = final_std("lf");
  const double hf = final_std("hf");
  const double hlf = final_std("hlf");
  const double noisy = std::min(van, lf);
  Outcome o;
  o.passed = hf * 2.0 <= noisy && hlf * 2.0 <= noisy;
  o.details.push_back("final std_gap at T=" + std::to_string(cfg.spec.T) + ", " + std::to_string(cfg.spec.n_trials) +
                      " trials: vanilla " + fmt(van) + ", lf " + fmt(lf) + ", hf " + fmt(hf) + ", hlf " + fmt(hlf));
  o.details.push_back("largest filtered/unfiltered ratio " + fmt(std::max(hf, hlf) / noisy) + " (limit 0.5)");
  return o;
}

Outcome ac7_acceleration() {
  Outcome o;
  RunConfig a = canned("case_1_1a");
  const ExperimentResult ra = run_trials(a.spec);
  const auto hlf = to_tenth(aggregate(by_label(ra, "hlf").trials));
  const auto hf = to_tenth(aggregate(by_label(ra, "hf").trials));
  auto vanilla = to_tenth(aggregate(by_label(ra, "vanilla").trials));
  std::string vanilla_note = "within T=" + std::to_string(a.spec.T);
  if (!vanilla && a.spec.methods.front().label == "vanilla") {
    // Vanilla is the first method, so running it alone reuses its trial seeds.
    RunConfig longer = a;
    longer.spec.methods.resize(1);
    longer.spec.T = 100000;
    longer.spec.record_stride = 100;
    vanilla = to_tenth(aggregate(run_trials(longer.spec).methods[0].trials));
    vanilla_note = "extended run to T=100000";
  }
  const bool order_a = before(hlf, hf) && before(hf, vanilla);
  o.details.push_back("case_1_1a iterations to 10% of initial gap: hlf " + iters(hlf) + ", hf " + iters(hf) +
                      ", vanilla " + iters(vanilla) + " (" + vanilla_note + ")");

  const RunConfig b = canned("case_2_2b");
  const ExperimentResult rb = run_trials(b.spec);
  const auto b_hlf = to_tenth(aggregate(by_label(rb, "hlf").trials));
  const auto b_hf = to_tenth(aggregate(by_label(rb, "hf").trials));
  const auto b_two = to_tenth(aggregate(by_label(rb, "two_point").trials));
  const bool order_b = before(b_two, b_hlf) && before(b_hlf, b_hf);
  o.details.push_back("case_2_2b iterations to 10% of initial gap: two_point " + iters(b_two) + ", hlf " +
                      iters(b_hlf) + ", hf " + iters(b_hf));
  o.details.push_back("case_1_1a has no two-point method and case_2_2b no vanilla method; each ordering is "
                      "checked on the case that contains its methods");
  o.passed = order_a && order_b;
  return o;
}

Outcome ac8_beta_optimality() {
  const RunConfig cfg = canned("case_1_2b_scaled");
  const std::vector<double> betas = cfg.beta_sweep.empty() ? std::vector<double>{0.6, 0.8, 1.0, 1.2, 1.4}
                                                           : cfg.beta_sweep;
  std::vector<double> finals;
  std::string line = "final mean_gap:";
  for (double beta : betas) {
    RunConfig point = cfg;
    for (MethodSpec& m : point.spec.methods) m.hp.beta = beta;
    const ExperimentResult r = run_trials(point.spec);
    const AggregateStats agg = aggregate(r.methods.front().trials);
    finals.push_back(agg.final_row().mean_gap);
    line += " beta " + fmt(beta, 2) + " -> " + fmt(finals.back(), 6);
    if (agg.diverged_trial_count > 0) line += " (" + std::to_string(agg.diverged_trial_count) + " diverged)";
  }
  const auto best = std::min_element(finals.begin(), finals.end()) - finals.begin();
  Outcome o;
  o.passed = betas[static_cast<std::size_t>(best)] == 1.0;
  o.details.push_back("d=" + std::to_string(cfg.spec.objective.d) + ", N=" + std::to_string(cfg.spec.objective.n_rows) +
                      ", T=" + std::to_string(cfg.spec.T) + ", " + std::to_string(cfg.spec.n_trials) +
                      " trials, eta=" + fmt(cfg.spec.methods.front().hp.eta));
  o.details.push_back(line);
  o.details.push_back("smallest at beta " + fmt(betas[static_cast<std::size_t>(best)], 2));
  return o;
}

Outcome ac9_test_functions() {
  Outcome o;
  o.passed = true;
  struct Target {
    const char* config;
    double limit;
  };
  for (const Target& t : {Target{"case_2_2a", 1e-2}, Target{"case_2_2b", 1e-3}}) {
    RunConfig cfg = canned(t.config);
    std::erase_if(cfg.spec.methods, [](const MethodSpec& m) { return m.method != Method::hlf_szo; });
    cfg.spec.T = std::min<std::int64_t>(cfg.spec.T, 200000);
    cfg.spec.n_trials = 20;
    const ExperimentResult r = run_trials(cfg.spec);
    std::vector<double> finals;
    std::size_t diverged = 0;
    for (const TrialRun& trial : r.methods.front().trials) {
      if (trial.run.diverged) {
        ++diverged;
        finals.push_back(INFINITY);
      } else {
        finals.push_back(trial.run.trace.back().f_x);
      }
    }
    std::sort(finals.begin(), finals.end());
    const double median = 0.5 * (finals[finals.size() / 2 - 1] + finals[finals.size() / 2]);
    const bool ok = median <= t.limit;
    o.passed = o.passed && ok;
    o.details.push_back(std::string(t.config) + ": hlf median final f " + fmt(median) + " (limit " + fmt(t.limit) +
                        ", T=" + std::to_string(cfg.spec.T) + ", " + std::to_string(diverged) + " diverged)");
  }
  return o;
}

Outcome ac10_theorem() {
  TheoremInputs in;
  in.d = 2.0;
  in.T = 1000.0;
  std::ostringstream text;
  cmd_theorem(in, false, text);
  const std::string s = text.str();
  const bool printed = s.find("eta_max   0.002\n") != std::string::npos &&
                       s.find("r window  [0.016, 0.1]") != std::string::npos;
  Outcome o = from_checks(check_theorem_arith());
  o.passed = o.passed && printed;
  o.details.insert(o.details.begin(), std::string(printed ? "ok   " : "FAIL ") + "theorem command prints eta_max 0.002 and r window [0.016, 0.1]");
  return o;
}

std::vector<Criterion> criteria() {
  return {
      {"AC1", "reduction identities", 1.0, [] { return from_checks(check_reductions(1000)); }},
      {"AC2", "filter form equals HLF", 5.0, [] { return from_checks({check_filter_bridge(10000, 5)}); }},
      {"AC3", "estimator unbiasedness", 30.0, [] { return from_checks({check_estimator_unbiasedness(10, 1000000)}); }},
      {"AC4", "smoothing bounds", 30.0, [] { return from_checks(check_smoothing_bounds(10, 200000)); }},
      {"AC5", "query accounting", 120.0, ac5_query_accounting},
      {"AC6", "variance reduction", 30.0, ac6_variance_reduction},
      {"AC7", "acceleration ordering", 120.0, ac7_acceleration},
      {"AC8", "beta = 1 optimality", 120.0, ac8_beta_optimality},
      {"AC9", "test-function minimization", 60.0, ac9_test_functions},
      {"AC10", "theorem arithmetic", 1.0, ac10_theorem},
      {"AC11", "extremum-seeking averaging", 10.0, [] { return from_checks(check_es_averaging()); }},
      {"AC12", "gradient checks", 5.0, [] { return from_checks(check_gradients(100)); }},
  };
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> known_red;
  std::set<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if ((arg == "--known-red" || arg == "--only") && i + 1 < argc) {
      (arg == "--known-red" ? known_red : only).insert(argv[++i]);
    } else {
      std::cerr << "usage: szo_acceptance [--known-red ID]... [--only ID]...\n";
      return 2;
    }
  }

  int unexpected = 0;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && !only.contains(c.id)) continue;
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.passed = false;
      outcome.details.push_back(std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_budget = secs <= c.budget_seconds;
    const bool passed = outcome.passed && in_budget;
    std::string status = passed ? "PASS" : "FAIL";
    if (!passed && known_red.contains(c.id)) status += " (known red)";
    if (!passed && !known_red.contains(c.id)) ++unexpected;
    std::cout << std::left << std::setw(5) << c.id << ' ' << status << "  " << c.title << "  [" << fmt(secs, 3)
              << " s, budget " << fmt(c.budget_seconds, 3) << " s" << (in_budget ? "" : ", over budget") << "]\n";
    for (const std::string& d : outcome.details) std::cout << "      " << d << '\n';
    std::cout.flush();
  }
  return unexpected == 0 ? 0 : 1;
}
