#include "georev/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "georev/golden_section.hpp"
#include "georev/mc.hpp"
#include "georev/quadrature.hpp"

namespace georev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QuadOptions functional_quad_options() {
  QuadOptions q;
  q.abs_tol = 1e-11;
  q.rel_tol = 1e-11;
  q.max_intervals = 8192;
  return q;
}

Method weaker(Method a, Method b) { return a > b ? a : b; }

FunctionalResult from_store(const std::vector<double>& store, bool log_space) {
  mc::Moments<1> m;
  for (double v : store) m.add({log_space ? std::log(v) : v});
  FunctionalResult r;
  r.method = Method::MonteCarlo;
  r.sample_count = store.size();
  if (log_space) {
    r.value = std::exp(m.mean(0));
    r.std_err = r.value * m.std_err(0);  // delta method through exp
  } else {
    r.value = m.mean(0);
    r.std_err = m.std_err(0);
  }
  return r;
}

FunctionalResult sampled_mean(const Distribution& dist, const McOptions& mc,
                              bool log_space) {
  auto total = mc::run_chunked<1>(
      mc.budget, mc.seed, mc.workers,
      [&](Rng& rng, std::size_t count, mc::Moments<1>& out) {
        for (std::size_t i = 0; i < count; ++i) {
          const double x = dist.quantile(rng.uniform());
          out.add({log_space ? std::log(x) : x});
        }
      });
  FunctionalResult r;
  r.method = Method::MonteCarlo;
  r.sample_count = total.count;
  if (log_space) {
    r.value = std::exp(total.mean(0));
    r.std_err = r.value * total.std_err(0);
  } else {
    r.value = total.mean(0);
    r.std_err = total.std_err(0);
  }
  return r;
}

// Tail-growth heuristic for a quadrature that failed to converge: the mean is
// declared infinite when the mass q * Q(1-q) fails to vanish as q -> 0. For a
// tail exponent 1/m the ratio below is 1e-4^(1 - 1/m), so the 0.9 cut fires
// only within about 1% of the integrability boundary.
bool tail_suggests_divergence(const Distribution& dist) {
  const double t1 = 1e-8 * dist.quantile(1.0 - 1e-8);
  const double t2 = 1e-12 * dist.quantile(1.0 - 1e-12);
  return t2 > 0.9 * t1;
}

FunctionalResult quadrature_mean(const Distribution& dist, bool log_space) {
  const auto q = integrate(
      [&](double u) {
        const double x = dist.quantile(u);
        return log_space ? std::log(x) : x;
      },
      0.0, 1.0, functional_quad_options());

  FunctionalResult r;
  r.method = Method::Quadrature;
  if (!q.converged && !log_space && tail_suggests_divergence(dist)) {
    r.value = kInf;
    return r;
  }
  if (log_space) {
    r.value = std::exp(q.value);
    r.std_err = q.converged ? 0.0 : r.value * q.error;
  } else {
    r.value = q.value;
    r.std_err = q.converged ? 0.0 : q.error;
  }
  return r;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed_form";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

bool FunctionalResult::is_infinite() const { return std::isinf(value); }

FunctionalResult scale_result(const FunctionalResult& r, double k) {
  FunctionalResult out = r;
  out.value = r.value * k;
  out.std_err = r.std_err * std::abs(k);
  return out;
}

FunctionalResult expectation(const Distribution& dist,
                             std::optional<Method> force, const McOptions& mc) {
  if (force == Method::MonteCarlo) {
    if (const auto* store = dist.sample_store())
      return from_store(*store, false);
    return sampled_mean(dist, mc, false);
  }
  if (force == Method::Quadrature) return quadrature_mean(dist, false);
  if (force == Method::ClosedForm) {
    const auto cf = dist.mean_closed_form();
    if (!cf) throw std::invalid_argument("expectation: no closed form available");
    return FunctionalResult{*cf, Method::ClosedForm, 0.0, 0};
  }

  if (const auto cf = dist.mean_closed_form())
    return FunctionalResult{*cf, Method::ClosedForm, 0.0, 0};
  if (dist.mean_known_infinite())
    return FunctionalResult{kInf, Method::ClosedForm, 0.0, 0};
  if (const auto* store = dist.sample_store()) return from_store(*store, false);
  return quadrature_mean(dist, false);
}

FunctionalResult geometric_expectation(const Distribution& dist,
                                       std::optional<Method> force,
                                       const McOptions& mc) {
  if (force == Method::MonteCarlo) {
    if (const auto* store = dist.sample_store()) return from_store(*store, true);
    return sampled_mean(dist, mc, true);
  }
  if (force == Method::Quadrature) return quadrature_mean(dist, true);
  if (force == Method::ClosedForm) {
    const auto lm = dist.log_mean_closed_form();
    if (!lm)
      throw std::invalid_argument(
          "geometric_expectation: no closed form available");
    return FunctionalResult{std::exp(*lm), Method::ClosedForm, 0.0, 0};
  }

  if (const auto lm = dist.log_mean_closed_form())
    return FunctionalResult{std::exp(*lm), Method::ClosedForm, 0.0, 0};
  if (const auto* store = dist.sample_store()) return from_store(*store, true);
  return quadrature_mean(dist, true);
}

FunctionalResult concentration_ratio(const Distribution& dist,
                                     std::optional<Method> force,
                                     const McOptions& mc) {
  const auto g = geometric_expectation(dist, force, mc);
  const auto e = expectation(dist, force, mc);

  FunctionalResult r;
  r.method = weaker(g.method, e.method);
  r.sample_count = std::max(g.sample_count, e.sample_count);
  if (e.is_infinite()) {
    r.value = 0.0;  // infinite mean: the spread swallows the geometric mean
    return r;
  }
  r.value = std::clamp(g.value / e.value, 0.0, 1.0);
  if (g.std_err > 0.0 || e.std_err > 0.0) {
    const double rel_g = g.value > 0.0 ? g.std_err / g.value : 0.0;
    const double rel_e = e.value > 0.0 ? e.std_err / e.value : 0.0;
    r.std_err = r.value * std::hypot(rel_g, rel_e);
  }
  return r;
}

double posted_price_revenue(const Distribution& dist, double price) {
  if (!(price > 0.0))
    throw std::invalid_argument("posted_price_revenue: price must be positive");
  return price * dist.survival(price);
}

MonopolyPriceResult monopoly_price(const Distribution& dist,
                                   const MonopolySearchOptions& opts) {
  const auto revenue = [&](double r) { return r * dist.survival(r); };

  // Discrete laws: the supremum sits on an atom, so maximize over them.
  if (const auto* store = dist.sample_store()) {
    const auto& s = *store;
    MonopolyPriceResult best{s.front(), 0.0, true};
    const auto n = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i > 0 && s[i] == s[i - 1]) continue;
      const double rev = s[i] * (n - static_cast<double>(i)) / n;
      if (rev > best.revenue) best = {s[i], rev, true};
    }
    return best;
  }

  double lo = dist.quantile(opts.tail_mass);
  double hi = dist.quantile(1.0 - opts.tail_mass);
  const double left_end = dist.support_lo();

  if (!(hi > lo)) {  // degenerate window (point mass)
    const double p = lo;
    return MonopolyPriceResult{p, revenue(p), true};
  }

  std::vector<double> candidates;
  candidates.reserve(opts.grid + 2);
  if (std::isfinite(left_end) && left_end > 0.0) candidates.push_back(left_end);
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  for (std::size_t j = 0; j < opts.grid; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(opts.grid - 1);
    candidates.push_back(std::exp(log_lo + t * (log_hi - log_lo)));
  }
  if (!dist.atomless()) {
    // Atoms carry the jumps; a quantile sweep lands exactly on them.
    for (std::size_t j = 0; j < 2048; ++j)
      candidates.push_back(
          dist.quantile((static_cast<double>(j) + 0.5) / 2048.0));
  }

  // Ascending scan with a strict comparison: revenue ties resolve to the
  // smallest price, which keeps the search deterministic.
  std::sort(candidates.begin(), candidates.end());
  std::size_t best_idx = 0;
  double best_rev = -1.0;
  double min_rev = kInf;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    const double rev = revenue(candidates[j]);
    if (rev > best_rev) {
      best_rev = rev;
      best_idx = j;
    }
    min_rev = std::min(min_rev, rev);
  }

  // Equal-revenue detection: flat objective over the whole window. Report
  // the smallest price achieving the supremum, flagged as not attained.
  if (best_rev - min_rev <= opts.flat_tol * std::max(best_rev, 1e-300)) {
    const double smallest = candidates.front();
    return MonopolyPriceResult{smallest, revenue(smallest), false};
  }

  MonopolyPriceResult result{candidates[best_idx], best_rev, true};
  if (dist.atomless()) {
    // Refine between the survey neighbors of the best point.
    const double a = best_idx > 0 ? candidates[best_idx - 1] : candidates[best_idx];
    const double b = best_idx + 1 < candidates.size() ? candidates[best_idx + 1]
                                                      : candidates[best_idx];
    if (b > a) {
      const auto g = golden_section_maximize(revenue, a, b, 0.0, opts.xtol);
      if (g.fx >= result.revenue) result = {g.x, g.fx, true};
    }
  }
  return result;
}

FunctionalResult random_reserve_revenue(const MaxValueDistribution& max_dist,
                                        const McOptions& mc) {
  if (max_dist.analytic()) {
    const bool atomless = max_dist.atomless();
    const auto q = integrate(
        [&](double u) {
          const double r = max_dist.quantile(u);
          return r * (atomless ? 1.0 - u : max_dist.survival(r));
        },
        0.0, 1.0, functional_quad_options());
    FunctionalResult r;
    r.method = Method::Quadrature;
    r.value = q.value;
    r.std_err = q.converged ? 0.0 : q.error;
    return r;
  }

  // Reserve resampled from the stored maxima, valuation drawn fresh from the
  // source model; the two streams are independent.
  const auto& model = max_dist.source();
  const std::size_t n = model.buyer_count();
  auto total = mc::run_chunked<1>(
      mc.budget, mc.seed, mc.workers,
      [&](Rng& rng, std::size_t count, mc::Moments<1>& out) {
        std::vector<double> profile(n);
        for (std::size_t i = 0; i < count; ++i) {
          const double reserve = max_dist.sample(rng);
          model.sample_profile(rng, profile);
          const double vmax = *std::max_element(profile.begin(), profile.end());
          out.add({vmax >= reserve ? reserve : 0.0});
        }
      });
  FunctionalResult r;
  r.method = Method::MonteCarlo;
  r.value = total.mean(0);
  r.std_err = total.std_err(0);
  r.sample_count = total.count;
  return r;
}

FunctionalResult log_survival_expectation(const Distribution& dist,
                                          const McOptions& mc) {
  if (dist.sample_store() != nullptr)
    throw std::invalid_argument(
        "log_survival_expectation: sample-backed laws are discrete; the "
        "identity needs the underlying continuous law");
  if (!dist.atomless())
    throw std::invalid_argument(
        "log_survival_expectation: requires an atomless distribution (the "
        "E[log(1-F(X))] = -1 identity fails at atoms)");

  auto total = mc::run_chunked<1>(
      mc.budget, mc.seed, mc.workers,
      [&](Rng& rng, std::size_t count, mc::Moments<1>& out) {
        for (std::size_t i = 0; i < count; ++i) {
          const double x = dist.quantile(rng.uniform());
          out.add({std::log(dist.survival(x))});
        }
      });
  FunctionalResult r;
  r.method = Method::MonteCarlo;
  r.value = total.mean(0);
  r.std_err = total.std_err(0);
  r.sample_count = total.count;
  return r;
}

}  // namespace georev
