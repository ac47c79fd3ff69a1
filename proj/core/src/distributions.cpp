#include "georev/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "georev/normal.hpp"

namespace georev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.5772156649015328606065121;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// x log x - x, continuously extended to 0 at x = 0.
double xlogx_minus_x(double x) { return x <= 0.0 ? 0.0 : x * std::log(x) - x; }

std::string format_describe(const Family& family) {
  char buf[160];
  if (const auto* p = std::get_if<PowerLaw>(&family)) {
    if (p->scale == 1.0)
      std::snprintf(buf, sizeof buf, "powerlaw(m=%g)", p->exponent);
    else
      std::snprintf(buf, sizeof buf, "powerlaw(m=%g, scale=%g)", p->exponent,
                    p->scale);
  } else if (const auto* e = std::get_if<Exponential>(&family)) {
    std::snprintf(buf, sizeof buf, "exponential(rate=%g)", e->rate);
  } else if (const auto* u = std::get_if<Uniform>(&family)) {
    std::snprintf(buf, sizeof buf, "uniform(%g, %g)", u->lo, u->hi);
  } else if (const auto* pm = std::get_if<PointMass>(&family)) {
    std::snprintf(buf, sizeof buf, "pointmass(%g)", pm->value);
  } else if (const auto* ln = std::get_if<LogNormal>(&family)) {
    std::snprintf(buf, sizeof buf, "lognormal(mu=%g, sigma=%g)", ln->mu,
                  ln->sigma);
  } else {
    const auto& emp = std::get<Empirical>(family);
    std::snprintf(buf, sizeof buf, "empirical(n=%zu)", emp.values.size());
  }
  return buf;
}

}  // namespace

MarginalDistribution::MarginalDistribution(Family family)
    : family_(std::move(family)) {
  std::visit(
      [](auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          require(std::isfinite(f.exponent) && f.exponent >= 1.0,
                  "powerlaw: exponent must be >= 1");
          require(std::isfinite(f.scale) && f.scale > 0.0,
                  "powerlaw: scale must be positive");
        } else if constexpr (std::is_same_v<T, Exponential>) {
          require(std::isfinite(f.rate) && f.rate > 0.0,
                  "exponential: rate must be positive");
        } else if constexpr (std::is_same_v<T, Uniform>) {
          require(std::isfinite(f.lo) && std::isfinite(f.hi) && f.lo >= 0.0 &&
                      f.hi > f.lo,
                  "uniform: need 0 <= lo < hi");
        } else if constexpr (std::is_same_v<T, PointMass>) {
          require(std::isfinite(f.value) && f.value > 0.0,
                  "pointmass: value must be positive");
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          require(std::isfinite(f.mu), "lognormal: mu must be finite");
          require(std::isfinite(f.sigma) && f.sigma > 0.0,
                  "lognormal: sigma must be positive");
        } else {
          require(!f.values.empty(), "empirical: sample list is empty");
          for (double v : f.values)
            require(std::isfinite(v) && v > 0.0,
                    "empirical: all values must be positive");
          std::sort(f.values.begin(), f.values.end());
        }
      },
      family_);
}

double MarginalDistribution::cdf(double x) const {
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          if (x <= f.scale) return 0.0;
          return 1.0 - std::pow(f.scale / x, f.exponent);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return x <= 0.0 ? 0.0 : -std::expm1(-f.rate * x);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          if (x <= f.lo) return 0.0;
          if (x >= f.hi) return 1.0;
          return (x - f.lo) / (f.hi - f.lo);
        } else if constexpr (std::is_same_v<T, PointMass>) {
          return x >= f.value ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          if (x <= 0.0) return 0.0;
          return 0.5 * std::erfc(-(std::log(x) - f.mu) /
                                 (f.sigma * std::sqrt(2.0)));
        } else {
          const auto& v = f.values;
          auto it = std::upper_bound(v.begin(), v.end(), x);
          return static_cast<double>(it - v.begin()) /
                 static_cast<double>(v.size());
        }
      },
      family_);
}

double MarginalDistribution::cdf_left(double x) const {
  return std::visit(
      [this, x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return x > f.value ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, Empirical>) {
          const auto& v = f.values;
          auto it = std::lower_bound(v.begin(), v.end(), x);
          return static_cast<double>(it - v.begin()) /
                 static_cast<double>(v.size());
        } else {
          return cdf(x);  // atomless
        }
      },
      family_);
}

double MarginalDistribution::survival(double x) const {
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return x <= f.scale ? 1.0 : std::pow(f.scale / x, f.exponent);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return x <= 0.0 ? 1.0 : std::exp(-f.rate * x);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          if (x <= f.lo) return 1.0;
          if (x >= f.hi) return 0.0;
          return (f.hi - x) / (f.hi - f.lo);
        } else if constexpr (std::is_same_v<T, PointMass>) {
          return x <= f.value ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          if (x <= 0.0) return 1.0;
          return 0.5 *
                 std::erfc((std::log(x) - f.mu) / (f.sigma * std::sqrt(2.0)));
        } else {
          const auto& v = f.values;
          auto it = std::lower_bound(v.begin(), v.end(), x);
          return static_cast<double>(v.end() - it) /
                 static_cast<double>(v.size());
        }
      },
      family_);
}

double MarginalDistribution::quantile(double u) const {
  require(u > 0.0 && u < 1.0, "quantile: u must lie in (0, 1)");
  return std::visit(
      [u](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return f.scale * std::pow(1.0 - u, -1.0 / f.exponent);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return -std::log1p(-u) / f.rate;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return f.lo + u * (f.hi - f.lo);
        } else if constexpr (std::is_same_v<T, PointMass>) {
          return f.value;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return std::exp(f.mu + f.sigma * normal_quantile(u));
        } else {
          // Left-continuous generalized inverse: the ceil(N*u)-th order
          // statistic (1-based).
          const auto& v = f.values;
          const auto n = static_cast<double>(v.size());
          auto k = static_cast<std::size_t>(std::ceil(n * u));
          if (k < 1) k = 1;
          if (k > v.size()) k = v.size();
          return v[k - 1];
        }
      },
      family_);
}

double MarginalDistribution::support_lo() const {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) return f.scale;
        if constexpr (std::is_same_v<T, Exponential>) return 0.0;
        if constexpr (std::is_same_v<T, Uniform>) return f.lo;
        if constexpr (std::is_same_v<T, PointMass>) return f.value;
        if constexpr (std::is_same_v<T, LogNormal>) return 0.0;
        if constexpr (std::is_same_v<T, Empirical>) return f.values.front();
      },
      family_);
}

double MarginalDistribution::support_hi() const {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Uniform>) return f.hi;
        if constexpr (std::is_same_v<T, PointMass>) return f.value;
        if constexpr (std::is_same_v<T, Empirical>) return f.values.back();
        return kInf;
      },
      family_);
}

bool MarginalDistribution::atomless() const {
  return !std::holds_alternative<PointMass>(family_) &&
         !std::holds_alternative<Empirical>(family_);
}

std::optional<double> MarginalDistribution::mean_closed_form() const {
  return std::visit(
      [](const auto& f) -> std::optional<double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          if (f.exponent <= 1.0) return kInf;
          return f.scale * f.exponent / (f.exponent - 1.0);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return 1.0 / f.rate;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return 0.5 * (f.lo + f.hi);
        } else if constexpr (std::is_same_v<T, PointMass>) {
          return f.value;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return std::exp(f.mu + 0.5 * f.sigma * f.sigma);
        } else {
          double s = 0.0;
          for (double v : f.values) s += v;
          return s / static_cast<double>(f.values.size());
        }
      },
      family_);
}

std::optional<double> MarginalDistribution::log_mean_closed_form() const {
  return std::visit(
      [](const auto& f) -> std::optional<double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return std::log(f.scale) + 1.0 / f.exponent;
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return -kEulerGamma - std::log(f.rate);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return (xlogx_minus_x(f.hi) - xlogx_minus_x(f.lo)) / (f.hi - f.lo);
        } else if constexpr (std::is_same_v<T, PointMass>) {
          return std::log(f.value);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return f.mu;
        } else {
          double s = 0.0;
          for (double v : f.values) s += std::log(v);
          return s / static_cast<double>(f.values.size());
        }
      },
      family_);
}

bool MarginalDistribution::mean_known_infinite() const {
  if (const auto* p = std::get_if<PowerLaw>(&family_))
    return p->exponent <= 1.0;
  return false;
}

MarginalDistribution MarginalDistribution::scaled(double k) const {
  require(std::isfinite(k) && k > 0.0, "scaled: factor must be positive");
  return std::visit(
      [k](const auto& f) -> MarginalDistribution {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return MarginalDistribution(PowerLaw{f.exponent, f.scale * k});
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return MarginalDistribution(Exponential{f.rate / k});
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return MarginalDistribution(Uniform{f.lo * k, f.hi * k});
        } else if constexpr (std::is_same_v<T, PointMass>) {
          return MarginalDistribution(PointMass{f.value * k});
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return MarginalDistribution(LogNormal{f.mu + std::log(k), f.sigma});
        } else {
          Empirical scaled_emp = f;
          for (double& v : scaled_emp.values) v *= k;
          return MarginalDistribution(std::move(scaled_emp));
        }
      },
      family_);
}

std::string MarginalDistribution::describe() const {
  return format_describe(family_);
}

Empirical load_empirical_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("empirical data file not readable: " + path);
  Empirical result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    char* end = nullptr;
    const double v = std::strtod(line.c_str() + first, &end);
    const bool trailing_junk =
        end != nullptr &&
        std::string_view(end).find_first_not_of(" \t\r") != std::string_view::npos;
    if (end == line.c_str() + first || trailing_junk || !std::isfinite(v))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected one decimal number per line");
    if (v <= 0.0)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": values must be positive");
    result.values.push_back(v);
  }
  if (result.values.empty())
    throw std::runtime_error(path + ": no values found");
  return result;
}

}  // namespace georev
