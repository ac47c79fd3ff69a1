#include "georev/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "georev/mc.hpp"

namespace georev {
namespace {

constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

std::size_t argmax_lowest(std::span<const double> profile) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < profile.size(); ++i)
    if (profile[i] > profile[best]) best = i;
  return best;
}

double second_highest(std::span<const double> profile, std::size_t winner) {
  double second = 0.0;  // a singleton profile has no competitor
  bool found = false;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i == winner) continue;
    if (!found || profile[i] > second) {
      second = profile[i];
      found = true;
    }
  }
  return found ? second : 0.0;
}

}  // namespace

AuctionOutcome run_posted_price(std::span<const double> profile, double price) {
  if (!(price > 0.0))
    throw std::invalid_argument("run_posted_price: price must be positive");
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] >= price)
      return AuctionOutcome{i, price, profile[i]};
  }
  return AuctionOutcome{};
}

AuctionOutcome run_second_price_reserve(std::span<const double> profile,
                                        double reserve) {
  if (profile.empty()) return AuctionOutcome{};
  const std::size_t winner = argmax_lowest(profile);
  if (profile[winner] < reserve) return AuctionOutcome{};
  const double payment = std::max(second_highest(profile, winner), reserve);
  return AuctionOutcome{winner, payment, profile[winner]};
}

AuctionOutcome run_second_price_replicated(std::span<const double> profile) {
  if (profile.empty() || profile.size() % 2 != 0)
    throw std::invalid_argument(
        "run_second_price_replicated: profile must hold an even, positive "
        "number of bids (original block plus replica)");
  return run_second_price_reserve(profile, 0.0);
}

RevenueEstimate estimate_revenue(const MechanismSpec& mech,
                                 const JointValuationModel& model,
                                 const EstimateOptions& opts,
                                 const MaxValueDistribution* fmax) {
  if (opts.budget < 1000)
    throw std::invalid_argument("estimate_revenue: budget must be >= 1000");
  if (mech.kind == MechanismKind::SecondPriceReplicated && !model.is_replicated())
    throw std::invalid_argument(
        "estimate_revenue: the replicated mechanism requires a replicated "
        "joint model");
  // Validate fixed prices up front; worker threads must never throw.
  if (const auto* fixed = std::get_if<FixedPrice>(&mech.source)) {
    if (mech.kind == MechanismKind::PostedPrice && !(fixed->value > 0.0))
      throw std::invalid_argument(
          "estimate_revenue: posted price must be positive");
    if (mech.kind == MechanismKind::SecondPriceReserve && !(fixed->value >= 0.0))
      throw std::invalid_argument(
          "estimate_revenue: reserve must be nonnegative");
  }

  const bool needs_fmax = mech.kind != MechanismKind::SecondPriceReplicated &&
                          std::holds_alternative<RandomFromMax>(mech.source);
  std::optional<MaxValueDistribution> local_fmax;
  if (needs_fmax && fmax == nullptr) {
    MaxDistConfig cfg;
    cfg.sample_budget = opts.max_store_budget != 0
                            ? opts.max_store_budget
                            : std::min<std::size_t>(opts.budget, 1'000'000);
    cfg.seed = derive_seed(opts.seed, 0xFA5u);
    local_fmax.emplace(model, cfg);
    fmax = &*local_fmax;
  }

  const double fixed_price = std::holds_alternative<FixedPrice>(mech.source)
                                 ? std::get<FixedPrice>(mech.source).value
                                 : 0.0;
  const std::size_t n = model.buyer_count();
  const std::size_t half = model.is_replicated() ? n / 2 : n;

  // Components: payment, welfare, payment from the original block, payment
  // from the replica block.
  auto total = mc::run_chunked<4>(
      opts.budget, opts.seed, opts.workers,
      [&](Rng& rng, std::size_t count, mc::Moments<4>& out) {
        std::vector<double> profile(n);
        for (std::size_t i = 0; i < count; ++i) {
          double price = fixed_price;
          if (needs_fmax) price = fmax->sample(rng);
          model.sample_profile(rng, profile);

          AuctionOutcome outcome;
          switch (mech.kind) {
            case MechanismKind::PostedPrice:
              outcome = run_posted_price(profile, price);
              break;
            case MechanismKind::SecondPriceReserve:
              outcome = run_second_price_reserve(profile, price);
              break;
            case MechanismKind::SecondPriceReplicated:
              outcome = run_second_price_replicated(profile);
              break;
          }
          const bool original_block = outcome.sold() && *outcome.winner < half;
          out.add({outcome.payment, outcome.welfare,
                   original_block ? outcome.payment : 0.0,
                   outcome.sold() && !original_block ? outcome.payment : 0.0});
        }
      });

  RevenueEstimate est;
  est.mean = total.mean(0);
  est.std_err = total.std_err(0);
  est.ci_lo = est.mean - kZ95 * est.std_err;
  est.ci_hi = est.mean + kZ95 * est.std_err;
  est.samples = total.count;
  est.seed = opts.seed;
  est.welfare_mean = total.mean(1);
  est.welfare_std_err = total.std_err(1);
  if (mech.kind == MechanismKind::SecondPriceReplicated) {
    est.blocks = {BlockRevenue{total.mean(2), total.std_err(2)},
                  BlockRevenue{total.mean(3), total.std_err(3)}};
  }
  return est;
}

}  // namespace georev
