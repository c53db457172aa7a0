#pragma once

#include <cstddef>
#include <functional>

namespace recmle {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;           // estimated absolute error of `value`
  bool converged = false;       // false: refinement cap hit or non-finite integrand
  double previous_value = 0.0;  // total before the last refinement step
  int depth = 0;                // deepest bisection level used
  std::size_t panels = 0;
};

// Globally adaptive 15-point Gauss-Kronrod integration over a finite
// interval. The panel with the largest error estimate is bisected until the
// summed estimate is <= tol (or at the round-off floor of the result).
// Refining a panel past `max_depth` bisections, or meeting a non-finite
// integrand value, stops with converged = false.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double tol, int max_depth = 20);

}  // namespace recmle
