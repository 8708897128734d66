#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace szo {

enum class ErrorKind {
  dimension_mismatch,
  non_finite,
  invalid_argument,
  ordering,
  solver_failure,
  iteration_limit,
  infeasible,
  config,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Structured error carried by every contract violation in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace szo
