#include "szo/theorem.hpp"

#include <cmath>

#include "szo/error.hpp"

namespace szo {

std::string_view to_string(TheoremCase c) { return c == TheoremCase::convex ? "convex" : "nonconvex"; }

TheoremCase parse_theorem_case(std::string_view name) {
  if (name == "convex") return TheoremCase::convex;
  if (name == "nonconvex") return TheoremCase::nonconvex;
  throw Error(ErrorKind::invalid_argument, "case must be convex or nonconvex");
}

TheoremBounds theorem_bounds(const TheoremInputs& in) {
  if (!(in.L > 0.0) || !(in.G > 0.0)) throw Error(ErrorKind::invalid_argument, "L and G must be positive");
  if (!(in.d >= 1.0) || !(in.T >= 1.0)) throw Error(ErrorKind::invalid_argument, "d and T must be at least 1");
  if (!(in.alpha >= 0.0 && in.alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha must lie in [0, 1) for the guarantee");
  }
  if (!(in.beta > 0.0 && in.beta < 2.0)) {
    throw Error(ErrorKind::invalid_argument, "beta must lie in (0, 2) for the guarantee");
  }

  const double beta_tilde = 1.0 - std::abs(1.0 - in.beta);
  const double cbrt_T = std::cbrt(in.T);

  TheoremBounds out;
  out.which = in.which;
  out.eta_max = (1.0 - in.alpha) * beta_tilde * beta_tilde / (25.0 * in.L * in.d * cbrt_T);
  out.eta = in.eta.value_or(out.eta_max);
  if (!(out.eta > 0.0)) throw Error(ErrorKind::invalid_argument, "eta must be positive");
  out.r_min = 4.0 * out.eta * in.d * in.G / (beta_tilde * (1.0 - in.alpha));
  out.r_max = in.G / (in.L * cbrt_T);

  if (out.eta > out.eta_max) {
    out.feasible = false;
    out.infeasibility = "eta exceeds eta_max";
  }
  if (out.r_min > out.r_max) {
    out.feasible = false;
    if (!out.infeasibility.empty()) out.infeasibility += "; ";
    out.infeasibility += "r_min exceeds r_max";
  }

  if (in.initial_gap) {
    const double rate = in.d / std::pow(in.T, 2.0 / 3.0);
    const double b2 = beta_tilde * beta_tilde;
    if (in.which == TheoremCase::convex) {
      out.bound_leading_term =
          rate * (75.0 * in.L * *in.initial_gap / (4.0 * b2) + 3.0 * in.G * in.G / (4.0 * in.L * in.d));
    } else {
      out.bound_leading_term = rate * (100.0 * in.L * *in.initial_gap / b2 + 8.0 * in.G * in.G / in.d);
    }
  }
  return out;
}

}  // namespace szo
