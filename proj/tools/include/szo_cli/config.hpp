#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "szo/experiments.hpp"

namespace szo::cli {

/// A runnable experiment as read from a JSON config file.
///
///   {
///     "case": "case_1_1a",
///     "objective": {"kind": "logistic", "d": 2, "n_rows": 20, "x_star": 0.5, "dataset_seed": 1},
///     "methods": [{"method": "hlf_szo", "eta": 0.05, "r": 0.1, "alpha": 0.9, "beta": 1.0}],
///     "T": 5000, "n_trials": 100, "base_seed": 2024, "x0": 0.0, "record_stride": 10
///   }
///
/// Vectors (x0, objective.x_star) accept a scalar, which fills every entry.
struct RunConfig {
  std::string case_label;
  ExperimentSpec spec;
  std::string out_dir;          // empty: runs/<case_label>
  std::size_t workers = 0;      // 0: available parallelism
  std::vector<double> beta_sweep;  // used by sweep-beta when no list is given on the command line

  bool operator==(const RunConfig& other) const;
};

/// Strict parse: unknown keys, missing keys, type mismatches and invariant
/// violations all throw ErrorKind::config with the key path in the message.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);
std::string serialize_config(const RunConfig& config);

/// Stable 64-bit FNV-1a hash of the canonical serialization.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace szo::cli
