#include "georev/verification.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "georev/mechanisms.hpp"
#include "georev/rng.hpp"

namespace georev {
namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

// Per-check seed streams, fixed so that checks run concurrently without
// perturbing one another.
enum SeedStream : std::uint64_t {
  kStreamStore = 1,
  kStreamRandomReserve = 2,
  kStreamAnonymousReserve = 3,
  kStreamReplication = 4,
  kStreamEfficiency = 5,
  kStreamLogSurvival = 6,
};

const MaxValueDistribution& ensure_fmax(
    const JointValuationModel& model, const CheckOptions& opts,
    const MaxValueDistribution* given,
    std::optional<MaxValueDistribution>& local) {
  if (given != nullptr) return *given;
  MaxDistConfig cfg;
  cfg.sample_budget = opts.store_budget != 0 ? opts.store_budget : opts.budget;
  cfg.seed = derive_seed(opts.seed, kStreamStore);
  local.emplace(model, cfg);
  return *local;
}

BoundReport make_report(BoundId id, const JointValuationModel& model,
                        const CheckOptions& opts) {
  BoundReport rep;
  rep.bound = id;
  rep.model = model.describe();
  rep.seed = opts.seed;
  rep.budget = opts.budget;
  return rep;
}

void finish(BoundReport& rep, double band = 3.0, bool two_sided = false) {
  rep.margin = rep.lhs.value - rep.rhs.value;
  rep.sigma = std::hypot(rep.lhs.std_err, rep.rhs.std_err);
  rep.verdict = classify_margin(rep.margin, rep.sigma, band, two_sided);
}

FunctionalResult from_estimate(const RevenueEstimate& est) {
  return FunctionalResult{est.mean, Method::MonteCarlo, est.std_err, est.samples};
}

McOptions mc_options(const CheckOptions& opts, std::uint64_t stream) {
  return McOptions{opts.budget, derive_seed(opts.seed, stream), opts.workers};
}

int severity(Verdict v) {
  switch (v) {
    case Verdict::Holds: return 0;
    case Verdict::HoldsWithinError: return 1;
    case Verdict::Vacuous:
    case Verdict::Rejected: return 2;
    case Verdict::Violated: return 3;
  }
  return 3;
}

}  // namespace

const char* bound_name(BoundId id) {
  switch (id) {
    case BoundId::MainTheorem: return "main_theorem";
    case BoundId::MonopolyCorollary: return "monopoly_corollary";
    case BoundId::AnonymousReserveCorollary: return "anonymous_reserve_corollary";
    case BoundId::ReplicationCorollary: return "replication_corollary";
    case BoundId::EfficiencyCorollary: return "efficiency_corollary";
    case BoundId::JensenInequality: return "jensen_inequality";
    case BoundId::LogSurvivalIdentity: return "log_survival_identity";
  }
  return "unknown";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::HoldsWithinError: return "holds_within_error";
    case Verdict::Violated: return "violated";
    case Verdict::Vacuous: return "vacuous";
    case Verdict::Rejected: return "rejected";
  }
  return "unknown";
}

Verdict classify_margin(double margin, double sigma, double band,
                        bool two_sided, double exact_tol) {
  const double half_width = sigma > 0.0 ? band * sigma : exact_tol;
  if (two_sided)
    return std::abs(margin) <= half_width ? Verdict::HoldsWithinError
                                          : Verdict::Violated;
  if (margin > half_width) return Verdict::Holds;
  if (margin >= -half_width) return Verdict::HoldsWithinError;
  return Verdict::Violated;
}

BoundReport check_main_theorem(const JointValuationModel& model,
                               const CheckOptions& opts,
                               const MaxValueDistribution* fmax) {
  std::optional<MaxValueDistribution> local;
  const auto& fm = ensure_fmax(model, opts, fmax, local);
  auto rep = make_report(BoundId::MainTheorem, model, opts);

  const auto geo = geometric_expectation(fm);
  if (geo.value <= 0.0) {
    rep.verdict = Verdict::Vacuous;
    rep.detail = "geometric expectation of V_max is zero; the bound is vacuous";
    return rep;
  }
  rep.lhs = random_reserve_revenue(fm, mc_options(opts, kStreamRandomReserve));
  rep.rhs = scale_result(geo, kInvE);
  finish(rep);
  return rep;
}

BoundReport check_monopoly_corollary(const JointValuationModel& model,
                                     const CheckOptions& opts,
                                     const MaxValueDistribution* fmax) {
  std::optional<MaxValueDistribution> local;
  const auto& fm = ensure_fmax(model, opts, fmax, local);
  auto rep = make_report(BoundId::MonopolyCorollary, model, opts);

  const auto geo = geometric_expectation(fm);
  if (geo.value <= 0.0) {
    rep.verdict = Verdict::Vacuous;
    rep.detail = "geometric expectation of V_max is zero; the bound is vacuous";
    return rep;
  }
  const auto mp = monopoly_price(fm);
  if (const auto* store = fm.sample_store()) {
    // Plug-in standard error of p * P_hat(X >= p) at the chosen price.
    const auto n = static_cast<double>(store->size());
    const double s = mp.revenue / mp.price;
    const double err = mp.price * std::sqrt(std::max(s * (1.0 - s), 0.0) / n);
    rep.lhs = FunctionalResult{mp.revenue, Method::MonteCarlo, err,
                               store->size()};
  } else {
    rep.lhs = FunctionalResult{mp.revenue, Method::Quadrature, 0.0, 0};
  }
  rep.rhs = scale_result(geo, kInvE);
  finish(rep);
  return rep;
}

BoundReport check_anonymous_reserve_corollary(const JointValuationModel& model,
                                              const CheckOptions& opts,
                                              const MaxValueDistribution* fmax) {
  std::optional<MaxValueDistribution> local;
  const auto& fm = ensure_fmax(model, opts, fmax, local);
  auto rep = make_report(BoundId::AnonymousReserveCorollary, model, opts);

  const auto geo = geometric_expectation(fm);
  if (geo.value <= 0.0) {
    rep.verdict = Verdict::Vacuous;
    rep.detail = "geometric expectation of V_max is zero; the bound is vacuous";
    return rep;
  }
  EstimateOptions eopts;
  eopts.budget = opts.budget;
  eopts.seed = derive_seed(opts.seed, kStreamAnonymousReserve);
  eopts.workers = opts.workers;
  const auto est = estimate_revenue(
      MechanismSpec{MechanismKind::SecondPriceReserve, RandomFromMax{}}, model,
      eopts, &fm);
  rep.lhs = from_estimate(est);
  rep.rhs = scale_result(geo, kInvE);
  finish(rep);
  return rep;
}

BoundReport check_replication_corollary(const JointValuationModel& model,
                                        const CheckOptions& opts,
                                        const MaxValueDistribution* fmax) {
  std::optional<MaxValueDistribution> local;
  const auto& fm = ensure_fmax(model, opts, fmax, local);
  auto rep = make_report(BoundId::ReplicationCorollary, model, opts);

  const auto geo = geometric_expectation(fm);
  if (geo.value <= 0.0) {
    rep.verdict = Verdict::Vacuous;
    rep.detail = "geometric expectation of V_max is zero; the bound is vacuous";
    return rep;
  }
  EstimateOptions eopts;
  eopts.budget = opts.budget;
  eopts.seed = derive_seed(opts.seed, kStreamReplication);
  eopts.workers = opts.workers;
  const auto est =
      estimate_revenue(MechanismSpec{MechanismKind::SecondPriceReplicated, {}},
                       JointValuationModel::replicated(model), eopts);
  rep.lhs = from_estimate(est);
  rep.rhs = scale_result(geo, 2.0 * kInvE);
  finish(rep);
  return rep;
}

BoundReport check_efficiency_corollary(const JointValuationModel& model,
                                       const CheckOptions& opts,
                                       const MaxValueDistribution* fmax) {
  std::optional<MaxValueDistribution> local;
  const auto& fm = ensure_fmax(model, opts, fmax, local);
  auto rep = make_report(BoundId::EfficiencyCorollary, model, opts);

  if (model.mean_known_infinite()) {
    rep.verdict = Verdict::Vacuous;
    rep.detail =
        "E[V_max] is infinite, so c = 0 and the (c/e)-approximation bound is "
        "vacuous";
    return rep;
  }

  const auto geo = geometric_expectation(fm);
  const auto mean = expectation(fm);
  if (mean.is_infinite()) {
    rep.verdict = Verdict::Vacuous;
    rep.detail =
        "E[V_max] is infinite, so c = 0 and the (c/e)-approximation bound is "
        "vacuous";
    return rep;
  }
  const double c = std::clamp(geo.value / mean.value, 0.0, 1.0);
  double c_err = 0.0;
  if (geo.std_err > 0.0 || mean.std_err > 0.0) {
    const double rel_g = geo.value > 0.0 ? geo.std_err / geo.value : 0.0;
    const double rel_e = mean.value > 0.0 ? mean.std_err / mean.value : 0.0;
    c_err = c * std::hypot(rel_g, rel_e);
  }

  EstimateOptions eopts;
  eopts.budget = opts.budget;
  eopts.seed = derive_seed(opts.seed, kStreamEfficiency);
  eopts.workers = opts.workers;
  const auto sim = estimate_revenue(
      MechanismSpec{MechanismKind::PostedPrice, RandomFromMax{}}, model, eopts,
      &fm);

  const double geo_over_e = geo.value * kInvE;
  const double geo_over_e_err = geo.std_err * kInvE;
  const double welfare_floor = c * mean.value * kInvE;
  const double welfare_floor_err =
      std::hypot(c_err * mean.value, c * mean.std_err) * kInvE;

  rep.links.clear();
  auto add_link = [&](std::string name, double lhs, double rhs, double sigma,
                      bool two_sided = false) {
    ChainLink link;
    link.name = std::move(name);
    link.lhs = lhs;
    link.rhs = rhs;
    link.margin = lhs - rhs;
    link.sigma = sigma;
    link.verdict = classify_margin(link.margin, sigma, 3.0, two_sided);
    rep.links.push_back(link);
  };
  // Welfare dominates revenue run by run, so the first margin is nonnegative
  // by construction; the band only grades Holds vs HoldsWithinError.
  add_link("welfare >= revenue", sim.welfare_mean, sim.mean,
           std::hypot(sim.welfare_std_err, sim.std_err));
  add_link("revenue >= geo/e", sim.mean, geo_over_e,
           std::hypot(sim.std_err, geo_over_e_err));
  add_link("geo/e >= (c/e)*mean", geo_over_e, welfare_floor,
           std::hypot(geo_over_e_err, welfare_floor_err));

  rep.lhs = FunctionalResult{sim.welfare_mean, Method::MonteCarlo,
                             sim.welfare_std_err, sim.samples};
  rep.rhs = FunctionalResult{welfare_floor,
                             welfare_floor_err > 0.0 ? Method::MonteCarlo
                                                     : mean.method,
                             welfare_floor_err, mean.sample_count};
  rep.margin = rep.lhs.value - rep.rhs.value;
  rep.sigma = std::hypot(rep.lhs.std_err, rep.rhs.std_err);
  rep.verdict = Verdict::Holds;
  for (const auto& link : rep.links)
    if (severity(link.verdict) > severity(rep.verdict)) rep.verdict = link.verdict;
  return rep;
}

BoundReport check_jensen(const JointValuationModel& model,
                         const CheckOptions& opts,
                         const MaxValueDistribution* fmax) {
  std::optional<MaxValueDistribution> local;
  const auto& fm = ensure_fmax(model, opts, fmax, local);
  auto rep = make_report(BoundId::JensenInequality, model, opts);
  rep.lhs = expectation(fm);
  rep.rhs = geometric_expectation(fm);
  finish(rep);
  return rep;
}

BoundReport check_log_survival_identity(const JointValuationModel& model,
                                        const CheckOptions& opts,
                                        const MaxValueDistribution* fmax) {
  std::optional<MaxValueDistribution> local;
  const auto& fm = ensure_fmax(model, opts, fmax, local);
  auto rep = make_report(BoundId::LogSurvivalIdentity, model, opts);
  try {
    rep.lhs = log_survival_expectation(fm, mc_options(opts, kStreamLogSurvival));
  } catch (const std::invalid_argument& e) {
    rep.verdict = Verdict::Rejected;
    rep.detail = e.what();
    return rep;
  }
  rep.rhs = FunctionalResult{-1.0, Method::ClosedForm, 0.0, 0};
  finish(rep, 4.0, /*two_sided=*/true);
  return rep;
}

std::vector<BoundReport> run_all_checks(const JointValuationModel& model,
                                        const CheckOptions& opts) {
  std::optional<MaxValueDistribution> local;
  const auto& fm = ensure_fmax(model, opts, nullptr, local);
  std::vector<BoundReport> reports;
  reports.push_back(check_main_theorem(model, opts, &fm));
  reports.push_back(check_monopoly_corollary(model, opts, &fm));
  reports.push_back(check_anonymous_reserve_corollary(model, opts, &fm));
  reports.push_back(check_replication_corollary(model, opts, &fm));
  reports.push_back(check_efficiency_corollary(model, opts, &fm));
  reports.push_back(check_jensen(model, opts, &fm));
  reports.push_back(check_log_survival_identity(model, opts, &fm));
  return reports;
}

std::vector<ZooEntry> standard_zoo() {
  std::vector<MarginalDistribution> families;
  families.emplace_back(PowerLaw{1.0});
  families.emplace_back(PowerLaw{1.56});
  families.emplace_back(PowerLaw{2.0});
  families.emplace_back(PowerLaw{4.0});
  families.emplace_back(Exponential{1.0});
  families.emplace_back(Uniform{0.0, 1.0});
  families.emplace_back(PointMass{3.0});
  families.emplace_back(LogNormal{0.0, 1.0});

  std::vector<ZooEntry> zoo;
  for (const auto& f : families) {
    auto single = JointValuationModel::iid(f, 1);
    zoo.push_back({single.describe(), single});
    for (std::size_t n : {2, 5}) {
      for (double rho : {0.0, 0.5, 1.0}) {
        auto m = JointValuationModel::common_value_mixture(rho, f, n);
        zoo.push_back({m.describe(), m});
      }
    }
  }
  return zoo;
}

}  // namespace georev
