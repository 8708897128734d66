#include <CLI11.hpp>
#include <iostream>

#include "szo/version.hpp"
#include "szo_cli/commands.hpp"
#include "szo_cli/verify.hpp"

namespace {

struct CommonFlags {
  std::string config;
  szo::cli::Overrides overrides;
};

// Flags shared by every config-driven command; each falls back to an SZO_* variable.
void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Run config (JSON)")->required()->envname("SZO_CONFIG");
  cmd->add_option("--out", flags.overrides.out, "Output directory")->envname("SZO_OUT");
  cmd->add_option("--seed", flags.overrides.seed, "Base seed override")->envname("SZO_SEED");
  cmd->add_option("--workers", flags.overrides.workers, "Worker threads (default: available parallelism)")
      ->envname("SZO_WORKERS");
  cmd->add_option("--trials", flags.overrides.trials, "Number of trials override")->envname("SZO_TRIALS");
  cmd->add_option("--iters", flags.overrides.iters, "Iteration budget T override")->envname("SZO_ITERS");
}

szo::cli::RunConfig load(const CommonFlags& flags) {
  return szo::cli::resolve(szo::cli::load_config(flags.config), flags.overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-point zeroth-order optimization with high-pass and low-pass filters"};
  app.set_version_flag("--version", SZO_VERSION_STRING);
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "Run every method of a config and write traces, aggregates and metadata");
  add_common(run, run_flags);

  CommonFlags sweep_flags;
  std::vector<double> betas;
  auto* sweep = app.add_subcommand("sweep-beta", "Repeat a config for each high-pass coefficient beta");
  add_common(sweep, sweep_flags);
  sweep->add_option("--betas", betas, "Beta values (default: the config's beta_sweep)")->delimiter(',');

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a property suite and print a JSON report");
  std::vector<std::string> suite_names = szo::cli::verify_suites();
  suite_names.push_back("all");
  verify->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names));

  szo::TheoremInputs theorem_in;
  std::string theorem_case = "convex";
  bool theorem_json = false;
  auto* theorem = app.add_subcommand("theorem", "Step-size and radius window of the convergence guarantee");
  theorem->add_option("--L", theorem_in.L, "Smoothness constant")->required();
  theorem->add_option("--G", theorem_in.G, "Lipschitz constant")->required();
  theorem->add_option("--d", theorem_in.d, "Dimension")->required();
  theorem->add_option("--T", theorem_in.T, "Iteration budget")->required();
  theorem->add_option("--alpha", theorem_in.alpha, "Low-pass coefficient in [0, 1)")->required();
  theorem->add_option("--beta", theorem_in.beta, "High-pass coefficient in (0, 2)")->required();
  theorem->add_option("--case", theorem_case, "convex or nonconvex")->check(CLI::IsMember({"convex", "nonconvex"}));
  theorem->add_option("--gap", theorem_in.initial_gap,
                      "||x1 - x*||^2 (convex) or f(x1) - f* (nonconvex); enables the bound term");
  theorem->add_option("--eta", theorem_in.eta, "Step size to check (default: eta_max)");
  theorem->add_flag("--json", theorem_json, "Print JSON");

  CommonFlags dataset_flags;
  std::string dataset_path;
  auto* dataset = app.add_subcommand("dataset", "Dataset utilities");
  auto* dataset_export = dataset->add_subcommand("export", "Write the config's generated dataset to a file");
  dataset->require_subcommand(1);
  dataset_export->add_option("--config", dataset_flags.config, "Run config (JSON)")->required();
  dataset_export->add_option("--file", dataset_path, "Destination file")->required();

  szo::cli::EsSimOptions es;
  auto* es_sim = app.add_subcommand("es-sim", "Integrate the scalar extremum-seeking loop and print CSV");
  es_sim->add_option("--function", es.function, "quadratic or quartic")->check(CLI::IsMember({"quadratic", "quartic"}));
  es_sim->add_option("--x0", es.x0, "Initial state");
  es_sim->add_option("--a", es.a, "Probe amplitude");
  es_sim->add_option("--omega", es.omega, "Probe frequency");
  es_sim->add_option("--omega-h", es.omega_H, "High-pass cut-off");
  es_sim->add_option("--omega-l", es.omega_L, "Low-pass cut-off");
  es_sim->add_flag("--filters", es.filters, "Enable the high-pass and low-pass filters");
  es_sim->add_option("--horizon", es.horizon, "Simulated time");
  es_sim->add_option("--steps-per-period", es.steps_per_period, "RK4 steps per probe period");
  es_sim->add_option("--sample-every", es.sample_every, "Keep every n-th state");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      szo::cli::cmd_run(load(run_flags), std::cout);
    } else if (*sweep) {
      const szo::cli::RunConfig cfg = load(sweep_flags);
      const std::vector<double> list = betas.empty() ? cfg.beta_sweep : betas;
      if (list.empty()) throw szo::Error(szo::ErrorKind::config, "no --betas given and the config has no beta_sweep");
      szo::cli::cmd_sweep_beta(cfg, list, std::cout, std::cerr);
    } else if (*verify) {
      return szo::cli::cmd_verify(suite, std::cout) ? 0 : 1;
    } else if (*theorem) {
      theorem_in.which = szo::parse_theorem_case(theorem_case);
      szo::cli::cmd_theorem(theorem_in, theorem_json, std::cout);
    } else if (*dataset_export) {
      szo::cli::cmd_dataset_export(szo::cli::load_config(dataset_flags.config), dataset_path, std::cout);
    } else if (*es_sim) {
      szo::cli::cmd_es_sim(es, std::cout);
    }
  } catch (const szo::Error& e) {
    std::cerr << "szo: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "szo: unexpected error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
