#include "szo/error.hpp"

namespace szo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::non_finite: return "non-finite value";
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::ordering: return "ordering violation";
    case ErrorKind::solver_failure: return "solver failure";
    case ErrorKind::iteration_limit: return "iteration limit";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::config: return "config error";
    case ErrorKind::io: return "io error";
  }
  return "error";
}

}  // namespace szo
