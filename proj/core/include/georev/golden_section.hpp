#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace georev {

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  std::size_t iterations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [a, b].
/// Stops when the bracket width drops below xtol_abs + xtol_rel * |x|.
inline GoldenResult golden_section_maximize(const std::function<double(double)>& f,
                                            double a, double b,
                                            double xtol_abs = 1e-12,
                                            double xtol_rel = 1e-12,
                                            std::size_t max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;  // 1/phi
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);

  GoldenResult res;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    const double mid = 0.5 * (a + b);
    if (b - a <= xtol_abs + xtol_rel * std::abs(mid)) break;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  res.x = 0.5 * (a + b);
  res.fx = f(res.x);
  return res;
}

}  // namespace georev
