#pragma once

#include <string>
#include <variant>
#include <vector>

#include "georev/distribution.hpp"
#include "georev/rng.hpp"

namespace georev {

// ---------------------------------------------------------------------------
// Marginal families. All mass must lie on the positive reals: the geometric
// expectation needs E[log X] to be well defined.
// ---------------------------------------------------------------------------

/// F(x) = 1 - (scale/x)^exponent on [scale, inf). exponent = 1 is the
/// equal-revenue law: every posted price yields the same revenue and the mean
/// is infinite.
struct PowerLaw {
  double exponent = 2.0;
  double scale = 1.0;
};

struct Exponential {
  double rate = 1.0;
};

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};

struct PointMass {
  double value = 1.0;
};

struct LogNormal {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Discrete law putting weight 1/N on each supplied value.
struct Empirical {
  std::vector<double> values;  // sorted ascending on construction
};

using Family =
    std::variant<PowerLaw, Exponential, Uniform, PointMass, LogNormal, Empirical>;

/// A single buyer's value law. Immutable after construction and safely
/// shareable across threads; all randomness flows through explicitly passed
/// generators.
class MarginalDistribution final : public Distribution {
public:
  /// Validates parameters; throws std::invalid_argument on violations
  /// (non-positive point mass, negative uniform endpoint, exponent < 1, ...).
  explicit MarginalDistribution(Family family);

  double cdf(double x) const override;
  double cdf_left(double x) const override;
  double survival(double x) const override;
  double quantile(double u) const override;

  double support_lo() const override;
  double support_hi() const override;
  bool atomless() const override;

  std::optional<double> mean_closed_form() const override;
  std::optional<double> log_mean_closed_form() const override;
  bool mean_known_infinite() const override;

  /// One draw via the quantile transform.
  double sample(Rng& rng) const { return quantile(rng.uniform()); }

  /// The same law with every value multiplied by k > 0.
  MarginalDistribution scaled(double k) const;

  const Family& family() const { return family_; }
  std::string describe() const;

private:
  Family family_;
};

/// Loads newline-delimited positive decimals (blank lines and '#' comments
/// allowed) into an Empirical family. Throws std::runtime_error with a
/// line-numbered message on malformed input.
Empirical load_empirical_file(const std::string& path);

}  // namespace georev
