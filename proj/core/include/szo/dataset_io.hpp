#pragma once

#include <filesystem>
#include <iosfwd>
#include <variant>

#include "szo/objectives.hpp"

namespace szo {

// Plain-text dataset format, one token group per line:
//
//   szo-dataset 1
//   kind logistic|ridge
//   rows N
//   cols d
//   seed S
//   x_star v_1 ... v_d
//   c <value>            (ridge only)
//   noise_std <value>    (ridge only)
//   data
//   <label or target> <row entry 1> ... <row entry d>     (N lines)
//
// Reals are written in shortest round-trip form, so export/import is bit exact.

using Dataset = std::variant<LogisticDataset, RidgeDataset>;

void write_dataset(std::ostream& os, const Dataset& ds);
Dataset read_dataset(std::istream& is);

void save_dataset(const std::filesystem::path& path, const Dataset& ds);
Dataset load_dataset(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);

}  // namespace szo
