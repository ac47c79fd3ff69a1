#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>

#include "georev/joint.hpp"

namespace georev {

/// Result of one mechanism run on one valuation profile. Winner pays at most
/// their value; no winner means zero payment and zero welfare.
struct AuctionOutcome {
  std::optional<std::size_t> winner;  // buyer index, lowest-index tie-break
  double payment = 0.0;
  double welfare = 0.0;  // winner's value

  bool sold() const { return winner.has_value(); }
};

/// Give the item at price p to the lowest-index buyer whose value clears p
/// (weak inequality: value == price buys). Throws on p <= 0.
AuctionOutcome run_posted_price(std::span<const double> profile, double price);

/// Second-price auction with an anonymous reserve r >= 0: the highest bidder
/// wins if they clear the reserve and pays max(second-highest value, r). The
/// second-highest of a single-bidder profile is 0.
AuctionOutcome run_second_price_reserve(std::span<const double> profile,
                                        double reserve);

/// Second-price auction over an original block plus its replica (2n bidders,
/// no reserve). Throws on odd or empty profiles.
AuctionOutcome run_second_price_replicated(std::span<const double> profile);

struct FixedPrice {
  double value;
};
/// Fresh draw from the law of V_max on every run.
struct RandomFromMax {};

using PriceSource = std::variant<FixedPrice, RandomFromMax>;

enum class MechanismKind { PostedPrice, SecondPriceReserve, SecondPriceReplicated };

struct MechanismSpec {
  MechanismKind kind = MechanismKind::PostedPrice;
  PriceSource source = RandomFromMax{};  // ignored by SecondPriceReplicated
};

/// Mean payment of one block of a replicated auction.
struct BlockRevenue {
  double mean = 0.0;
  double std_err = 0.0;
};

/// Monte Carlo revenue estimate. Deterministic given (mechanism, model,
/// options): the budget is processed in fixed-size chunks with derived
/// sub-seeds and reduced in chunk order, so worker count never changes a bit.
struct RevenueEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  double ci_lo = 0.0;  // 95% normal interval
  double ci_hi = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  double welfare_mean = 0.0;
  double welfare_std_err = 0.0;
  /// Winner-side decomposition, replicated mechanism only: [0] = original
  /// block, [1] = replica block. Each run's payment lands in exactly one.
  std::optional<std::array<BlockRevenue, 2>> blocks;
};

struct EstimateOptions {
  std::size_t budget = 1'000'000;  // must be >= 1000
  std::uint64_t seed = 0x715eedu;
  unsigned workers = 0;
  /// Store size when a sample-backed max-value law has to be built here;
  /// 0 means min(budget, 1e6).
  std::size_t max_store_budget = 0;
};

/// Mean payment over `budget` independent runs. A RandomFromMax source draws
/// a fresh reserve per run from `fmax` (built internally from the model when
/// not supplied). Throws if the mechanism and model do not match.
RevenueEstimate estimate_revenue(const MechanismSpec& mech,
                                 const JointValuationModel& model,
                                 const EstimateOptions& opts = {},
                                 const MaxValueDistribution* fmax = nullptr);

}  // namespace georev
