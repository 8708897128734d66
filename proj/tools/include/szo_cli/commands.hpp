#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "szo/theorem.hpp"
#include "szo_cli/config.hpp"

namespace szo::cli {

/// Command-line overrides applied on top of a loaded config.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> trials;
  std::optional<std::int64_t> iters;
};

/// Applies overrides and resolves defaults (output directory, worker count).
RunConfig resolve(RunConfig config, const Overrides& overrides);

/// Runs every method and writes traces.csv, aggregate.csv and metadata.json
/// into config.out_dir. On failure, files written so far are removed.
void cmd_run(const RunConfig& config, std::ostream& log);

/// One aggregate file per beta (aggregate_beta_<b>.csv) plus summary.csv and
/// metadata.json. Betas outside (0, 2) draw a warning but still run.
void cmd_sweep_beta(const RunConfig& config, const std::vector<double>& betas, std::ostream& log,
                    std::ostream& warn);

/// Runs one suite ("all" runs every suite), prints a JSON report and returns
/// true when every check passed.
bool cmd_verify(const std::string& suite, std::ostream& out);

/// Prints the theorem bounds as text or JSON.
void cmd_theorem(const TheoremInputs& inputs, bool as_json, std::ostream& out);

/// Generates (or loads) the configured regression dataset and writes it out.
void cmd_dataset_export(const RunConfig& config, const std::filesystem::path& path, std::ostream& log);

struct EsSimOptions {
  std::string function = "quadratic";  // quadratic (x^2) or quartic (x^4)
  double x0 = 1.0;
  double a = 0.1;
  double omega = 1000.0;
  double omega_H = 0.0;
  double omega_L = 1.0;
  bool filters = false;
  double horizon = 2.0;
  std::size_t steps_per_period = 40;
  std::size_t sample_every = 10;
};

/// Integrates the extremum-seeking loop and writes its trajectory as CSV.
void cmd_es_sim(const EsSimOptions& options, std::ostream& csv);

}  // namespace szo::cli
