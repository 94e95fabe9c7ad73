#pragma once

#include <functional>

namespace qmachine {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  int evaluations = 0;
};

/// Adaptive Simpson rule on [a, b] with absolute tolerance `tol`.
/// Subintervals that hit `max_depth` are accepted and mark the result
/// as not converged; their local error still enters `error_estimate`.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a,
                                  double b, double tol, int max_depth = 48);

}  // namespace qmachine
