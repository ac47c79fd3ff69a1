#pragma once

#include <optional>
#include <vector>

namespace georev {

/// CDF/quantile view of a positive-valued law. Implemented by the parametric
/// marginal families and by derived maximum-value distributions, so the
/// analytics layer can treat them uniformly.
///
/// Conventions:
///   cdf(x)      = P(X <= x)
///   cdf_left(x) = P(X <  x)
///   survival(x) = P(X >= x) = 1 - cdf_left(x), overridden where a direct
///                 closed form avoids cancellation (heavy tails),
///   quantile(u) = inf{ x : cdf(x) >= u } for u in (0, 1).
class Distribution {
public:
  virtual ~Distribution() = default;

  virtual double cdf(double x) const = 0;
  virtual double cdf_left(double x) const = 0;
  virtual double survival(double x) const { return 1.0 - cdf_left(x); }
  virtual double quantile(double u) const = 0;

  virtual double support_lo() const = 0;
  virtual double support_hi() const = 0;  // +inf for unbounded tails
  virtual bool atomless() const = 0;

  /// Exact E[X] when the family admits one; may be +inf.
  virtual std::optional<double> mean_closed_form() const { return std::nullopt; }
  /// Exact E[log X] when the family admits one.
  virtual std::optional<double> log_mean_closed_form() const { return std::nullopt; }
  /// True when the tail exponent already implies E[X] = +inf.
  virtual bool mean_known_infinite() const { return false; }

  /// Stored sample set for sample-backed laws, null otherwise. Analytics uses
  /// it to switch between quadrature and Monte Carlo routes.
  virtual const std::vector<double>* sample_store() const { return nullptr; }
};

}  // namespace georev
