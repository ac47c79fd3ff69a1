#pragma once

#include <cstdint>
#include <optional>

#include "georev/distribution.hpp"
#include "georev/joint.hpp"

namespace georev {

enum class Method { ClosedForm, Quadrature, MonteCarlo };

const char* method_name(Method m);

/// A scalar functional of a distribution together with how it was obtained.
/// Closed-form and converged quadrature results carry std_err = 0; Monte
/// Carlo results carry a positive standard error and the sample count. A
/// quadrature that failed to converge within the subdivision cap reports its
/// remaining error estimate in std_err instead of silently truncating.
struct FunctionalResult {
  double value = 0.0;
  Method method = Method::ClosedForm;
  double std_err = 0.0;
  std::size_t sample_count = 0;

  bool is_infinite() const;
};

/// result * k (errors scale along; +inf stays +inf).
FunctionalResult scale_result(const FunctionalResult& r, double k);

struct McOptions {
  std::size_t budget = 1'000'000;
  std::uint64_t seed = 0x5eed0001u;
  unsigned workers = 0;  // 0 = hardware concurrency
};

/// E[X]. Automatic route: closed form, else sample store, else quantile-space
/// quadrature of Q(u) over (0,1). Infinite means are detected analytically
/// for parametric tails and by a tail-growth heuristic otherwise, and
/// reported as +inf. `force` pins a route (used by method-agreement tests).
FunctionalResult expectation(const Distribution& dist,
                             std::optional<Method> force = std::nullopt,
                             const McOptions& mc = {});

/// exp(E[log X]); 0 if E[log X] = -inf.
FunctionalResult geometric_expectation(const Distribution& dist,
                                       std::optional<Method> force = std::nullopt,
                                       const McOptions& mc = {});

/// Concentration ratio c = G[X] / E[X] in [0, 1]; 0 when E[X] = +inf, 1 for
/// degenerate laws. Dimensionless: invariant under scaling of X.
FunctionalResult concentration_ratio(const Distribution& dist,
                                     std::optional<Method> force = std::nullopt,
                                     const McOptions& mc = {});

/// Posted-price revenue p * P(X >= p). The weak inequality means a buyer
/// whose value equals the price buys, so atoms at the price count.
double posted_price_revenue(const Distribution& dist, double price);

struct MonopolySearchOptions {
  std::size_t grid = 512;       // coarse log-spaced survey points
  double tail_mass = 1e-6;      // search window [Q(tail), Q(1-tail)]
  double xtol = 1e-12;          // golden-section bracket tolerance (relative)
  double flat_tol = 1e-12;      // equal-revenue detection, relative spread
};

struct MonopolyPriceResult {
  double price = 0.0;
  double revenue = 0.0;
  /// False when the revenue curve is flat over the search window (the
  /// supremum is approached everywhere, not attained at a unique price); the
  /// smallest such price is reported.
  bool attained = true;
};

/// argsup of r * P(X >= r): coarse log-spaced grid then golden-section
/// refinement in the best bracket. Discrete laws are maximized exactly over
/// their atoms.
MonopolyPriceResult monopoly_price(const Distribution& dist,
                                   const MonopolySearchOptions& opts = {});

/// Expected revenue of a posted price drawn from the law of V_max itself:
/// E_{r ~ F_max}[ r * P(V_max >= r) ]. Quadrature of Q(u) * P(X >= Q(u)) for
/// analytic laws; Monte Carlo pairing independent reserve and valuation
/// draws for sample-backed ones.
FunctionalResult random_reserve_revenue(const MaxValueDistribution& max_dist,
                                        const McOptions& mc = {});

/// Monte Carlo estimate of E[log(1 - F(X))] for X ~ F, which equals -1 for
/// every atomless law. Throws std::invalid_argument for laws with atoms or
/// sample-backed laws, where the identity does not apply.
FunctionalResult log_survival_expectation(const Distribution& dist,
                                          const McOptions& mc = {});

}  // namespace georev
