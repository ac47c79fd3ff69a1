#pragma once

#include <cstddef>
#include <functional>

namespace georev {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  // Hard cap on subdivisions. Endpoint singularities (log or algebraic) make
  // the worst-interval chain creep toward the endpoint, so the cap must be
  // generous; hitting it is reported, never silently ignored.
  std::size_t max_intervals = 8192;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error, valid even when !converged
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// Nodes are strictly interior, so integrable endpoint singularities are
/// never evaluated at the endpoint itself.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

}  // namespace georev
