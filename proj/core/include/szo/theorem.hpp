#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace szo {

enum class TheoremCase { convex, nonconvex };

std::string_view to_string(TheoremCase c);
TheoremCase parse_theorem_case(std::string_view name);

struct TheoremInputs {
  double L = 1.0;      // smoothness constant
  double G = 1.0;      // Lipschitz constant
  double d = 1.0;      // dimension
  double T = 1.0;      // iteration budget
  double alpha = 0.0;  // in [0, 1)
  double beta = 1.0;   // in (0, 2)
  TheoremCase which = TheoremCase::convex;
  /// ||x_1 - x*||^2 (convex) or f(x_1) - f* (nonconvex); the bound term is
  /// reported only when supplied.
  std::optional<double> initial_gap;
  /// Step size to check; defaults to eta_max.
  std::optional<double> eta;
};

/// Step-size and smoothing-radius window of the HLF-SZO convergence guarantees:
///   eta <= (1-a)(1-|1-b|)^2 / (25 L d T^{1/3})
///   4 eta d G / ((1-|1-b|)(1-a)) <= r <= G / (L T^{1/3})
/// and the O(d/T^{2/3}) bound obtained at eta = eta_max.
struct TheoremBounds {
  double eta_max = 0.0;
  double eta = 0.0;  // step size the radius window was evaluated at
  double r_min = 0.0;
  double r_max = 0.0;
  std::optional<double> bound_leading_term;
  TheoremCase which = TheoremCase::convex;
  bool feasible = true;
  std::string infeasibility;  // empty when feasible
};

/// Throws ErrorKind::invalid_argument when the hypotheses fail (beta outside
/// (0, 2), alpha outside [0, 1), non-positive L, G, d or T).
TheoremBounds theorem_bounds(const TheoremInputs& in);

}  // namespace szo
