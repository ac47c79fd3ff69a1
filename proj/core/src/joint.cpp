#include "georev/joint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <variant>

namespace georev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct IndependentModel {
  std::vector<MarginalDistribution> marginals;
};

struct MixtureModel {
  double rho;
  MarginalDistribution base;
  std::size_t n;
};

struct ReplicatedModel {
  JointValuationModel inner;
};

}  // namespace

struct JointValuationModel::Impl {
  std::variant<IndependentModel, MixtureModel, ReplicatedModel> structure;
};

JointValuationModel::JointValuationModel(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

JointValuationModel JointValuationModel::independent(
    std::vector<MarginalDistribution> marginals) {
  if (marginals.empty())
    throw std::invalid_argument("independent model needs at least one buyer");
  return JointValuationModel(std::make_shared<const Impl>(
      Impl{IndependentModel{std::move(marginals)}}));
}

JointValuationModel JointValuationModel::iid(const MarginalDistribution& marginal,
                                             std::size_t n) {
  if (n == 0) throw std::invalid_argument("iid model needs n >= 1");
  std::vector<MarginalDistribution> ms(n, marginal);
  return independent(std::move(ms));
}

JointValuationModel JointValuationModel::common_value_mixture(
    double rho, MarginalDistribution base, std::size_t n) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("mixture: rho must lie in [0, 1]");
  if (n == 0) throw std::invalid_argument("mixture: n must be >= 1");
  return JointValuationModel(std::make_shared<const Impl>(
      Impl{MixtureModel{rho, std::move(base), n}}));
}

JointValuationModel JointValuationModel::replicated(JointValuationModel inner) {
  return JointValuationModel(
      std::make_shared<const Impl>(Impl{ReplicatedModel{std::move(inner)}}));
}

std::size_t JointValuationModel::buyer_count() const {
  if (const auto* ind = std::get_if<IndependentModel>(&impl_->structure))
    return ind->marginals.size();
  if (const auto* mix = std::get_if<MixtureModel>(&impl_->structure))
    return mix->n;
  return 2 * std::get<ReplicatedModel>(impl_->structure).inner.buyer_count();
}

bool JointValuationModel::is_independent() const {
  return std::holds_alternative<IndependentModel>(impl_->structure);
}

bool JointValuationModel::is_mixture() const {
  return std::holds_alternative<MixtureModel>(impl_->structure);
}

bool JointValuationModel::is_replicated() const {
  return std::holds_alternative<ReplicatedModel>(impl_->structure);
}

const std::vector<MarginalDistribution>& JointValuationModel::marginals() const {
  return std::get<IndependentModel>(impl_->structure).marginals;
}

const MarginalDistribution& JointValuationModel::mixture_base() const {
  return std::get<MixtureModel>(impl_->structure).base;
}

double JointValuationModel::mixture_rho() const {
  return std::get<MixtureModel>(impl_->structure).rho;
}

std::size_t JointValuationModel::mixture_n() const {
  return std::get<MixtureModel>(impl_->structure).n;
}

const JointValuationModel& JointValuationModel::inner() const {
  return std::get<ReplicatedModel>(impl_->structure).inner;
}

bool JointValuationModel::mean_known_infinite() const {
  if (const auto* ind = std::get_if<IndependentModel>(&impl_->structure)) {
    for (const auto& m : ind->marginals)
      if (m.mean_known_infinite()) return true;
    return false;
  }
  if (const auto* mix = std::get_if<MixtureModel>(&impl_->structure))
    return mix->base.mean_known_infinite();
  return inner().mean_known_infinite();
}

void JointValuationModel::sample_profile(Rng& rng, std::span<double> out) const {
  if (out.size() != buyer_count())
    throw std::invalid_argument("sample_profile: output span has wrong length");
  if (const auto* ind = std::get_if<IndependentModel>(&impl_->structure)) {
    for (std::size_t i = 0; i < ind->marginals.size(); ++i)
      out[i] = ind->marginals[i].sample(rng);
    return;
  }
  if (const auto* mix = std::get_if<MixtureModel>(&impl_->structure)) {
    // Coupling indicator first, then the value draw(s).
    const bool coupled = rng.bernoulli(mix->rho);
    if (coupled) {
      const double shared = mix->base.sample(rng);
      std::fill(out.begin(), out.end(), shared);
    } else {
      for (std::size_t i = 0; i < mix->n; ++i) out[i] = mix->base.sample(rng);
    }
    return;
  }
  const auto& rep = std::get<ReplicatedModel>(impl_->structure);
  const std::size_t half = rep.inner.buyer_count();
  rep.inner.sample_profile(rng, out.subspan(0, half));
  rep.inner.sample_profile(rng, out.subspan(half, half));
}

std::vector<double> JointValuationModel::sample_profile(Rng& rng) const {
  std::vector<double> out(buyer_count());
  sample_profile(rng, out);
  return out;
}

std::string JointValuationModel::describe() const {
  if (const auto* ind = std::get_if<IndependentModel>(&impl_->structure)) {
    const auto& ms = ind->marginals;
    const bool homogeneous =
        std::all_of(ms.begin(), ms.end(), [&](const MarginalDistribution& m) {
          return m.describe() == ms.front().describe();
        });
    if (homogeneous) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " x %zu]", ms.size());
      return "independent[" + ms.front().describe() + buf;
    }
    std::string s = "independent[";
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (i) s += ", ";
      s += ms[i].describe();
    }
    return s + "]";
  }
  if (const auto* mix = std::get_if<MixtureModel>(&impl_->structure)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "mixture(rho=%g, n=%zu, base=", mix->rho,
                  mix->n);
    return buf + mix->base.describe() + ")";
  }
  return "replicated(" + inner().describe() + ")";
}

// ---------------------------------------------------------------------------
// MaxValueDistribution
// ---------------------------------------------------------------------------

MaxValueDistribution::MaxValueDistribution(JointValuationModel source,
                                           const MaxDistConfig& config)
    : source_(std::move(source)) {
  if (source_.is_independent()) return;  // analytic: product of marginal CDFs
  if (config.sample_budget == 0)
    throw std::invalid_argument("max distribution: sample budget must be >= 1");
  store_.resize(config.sample_budget);
  Rng rng(derive_seed(config.seed, 0x5700));
  std::vector<double> profile(source_.buyer_count());
  for (double& slot : store_) {
    source_.sample_profile(rng, profile);
    slot = *std::max_element(profile.begin(), profile.end());
  }
  std::sort(store_.begin(), store_.end());
}

const MarginalDistribution* MaxValueDistribution::single() const {
  if (analytic() && source_.marginals().size() == 1)
    return &source_.marginals().front();
  return nullptr;
}

double MaxValueDistribution::cdf(double x) const {
  if (!analytic()) {
    auto it = std::upper_bound(store_.begin(), store_.end(), x);
    return static_cast<double>(it - store_.begin()) /
           static_cast<double>(store_.size());
  }
  double prod = 1.0;
  for (const auto& m : source_.marginals()) {
    prod *= m.cdf(x);
    if (prod == 0.0) break;
  }
  return prod;
}

double MaxValueDistribution::cdf_left(double x) const {
  if (!analytic()) {
    auto it = std::lower_bound(store_.begin(), store_.end(), x);
    return static_cast<double>(it - store_.begin()) /
           static_cast<double>(store_.size());
  }
  double prod = 1.0;
  for (const auto& m : source_.marginals()) {
    prod *= m.cdf_left(x);
    if (prod == 0.0) break;
  }
  return prod;
}

double MaxValueDistribution::survival(double x) const {
  if (const auto* m = single()) return m->survival(x);
  if (!analytic()) {
    auto it = std::lower_bound(store_.begin(), store_.end(), x);
    return static_cast<double>(store_.end() - it) /
           static_cast<double>(store_.size());
  }
  return 1.0 - cdf_left(x);
}

double MaxValueDistribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("quantile: u must lie in (0, 1)");
  if (const auto* m = single()) return m->quantile(u);
  if (!analytic()) {
    const auto n = static_cast<double>(store_.size());
    auto k = static_cast<std::size_t>(std::ceil(n * u));
    if (k < 1) k = 1;
    if (k > store_.size()) k = store_.size();
    return store_[k - 1];
  }

  // Bisection for inf{ x : prod_i F_i(x) >= u }; bracket by doubling from the
  // support lower endpoint when the support is unbounded above.
  double lo = support_lo();
  double hi = support_hi();
  const bool bounded = std::isfinite(hi);
  if (!bounded) {
    hi = lo > 0.0 ? 2.0 * lo : 1.0;
    while (cdf(hi) < u) {
      hi *= 2.0;
      if (hi > 1e300) return hi;  // u indistinguishable from 1
    }
  }
  if (cdf(lo) >= u) return lo;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(mid) >= u)
      hi = mid;
    else
      lo = mid;
    const double tol = bounded ? 1e-12 : 1e-12 * std::max(1.0, std::abs(hi));
    if (hi - lo <= tol) break;
  }
  return hi;
}

double MaxValueDistribution::support_lo() const {
  if (!analytic()) return store_.front();
  double lo = 0.0;
  for (const auto& m : source_.marginals()) lo = std::max(lo, m.support_lo());
  return lo;
}

double MaxValueDistribution::support_hi() const {
  if (!analytic()) return store_.back();
  double hi = 0.0;
  for (const auto& m : source_.marginals()) hi = std::max(hi, m.support_hi());
  return hi;
}

bool MaxValueDistribution::atomless() const {
  if (!analytic()) return false;  // finite empirical store
  for (const auto& m : source_.marginals())
    if (!m.atomless()) return false;
  return true;
}

std::optional<double> MaxValueDistribution::mean_closed_form() const {
  if (const auto* m = single()) return m->mean_closed_form();
  if (analytic() && mean_known_infinite()) return kInf;
  return std::nullopt;
}

std::optional<double> MaxValueDistribution::log_mean_closed_form() const {
  if (const auto* m = single()) return m->log_mean_closed_form();
  return std::nullopt;
}

bool MaxValueDistribution::mean_known_infinite() const {
  return source_.mean_known_infinite();
}

const std::vector<double>* MaxValueDistribution::sample_store() const {
  return analytic() ? nullptr : &store_;
}

double MaxValueDistribution::sample(Rng& rng) const {
  if (analytic()) return quantile(rng.uniform());
  return store_[rng.index(store_.size())];
}

MaxValueDistribution max_distribution(const JointValuationModel& model,
                                      const MaxDistConfig& config) {
  return MaxValueDistribution(model, config);
}

}  // namespace georev
