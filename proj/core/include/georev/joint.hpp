#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "georev/distributions.hpp"

namespace georev {

/// Joint law of the n buyer valuations. Three structures:
///   - independent: one marginal per buyer,
///   - common-value mixture: with probability rho all buyers share a single
///     draw from the base law, otherwise they draw independently,
///   - replicated: two independent copies of an inner model side by side
///     (2 * n_inner buyers; the blocks are i.i.d.).
/// Immutable and cheap to copy.
class JointValuationModel {
public:
  static JointValuationModel independent(std::vector<MarginalDistribution> marginals);
  static JointValuationModel iid(const MarginalDistribution& marginal, std::size_t n);
  static JointValuationModel common_value_mixture(double rho,
                                                  MarginalDistribution base,
                                                  std::size_t n);
  static JointValuationModel replicated(JointValuationModel inner);

  std::size_t buyer_count() const;

  bool is_independent() const;
  bool is_mixture() const;
  bool is_replicated() const;

  const std::vector<MarginalDistribution>& marginals() const;  // independent
  const MarginalDistribution& mixture_base() const;            // mixture
  double mixture_rho() const;                                  // mixture
  std::size_t mixture_n() const;                               // mixture
  const JointValuationModel& inner() const;                    // replicated

  /// True when the tail of some component already forces E[V_max] = +inf.
  bool mean_known_infinite() const;

  /// One joint draw; out.size() must equal buyer_count().
  void sample_profile(Rng& rng, std::span<double> out) const;
  std::vector<double> sample_profile(Rng& rng) const;

  std::string describe() const;

private:
  struct Impl;
  explicit JointValuationModel(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

struct MaxDistConfig {
  std::size_t sample_budget = 1'000'000;  // sample-backed mode only
  std::uint64_t seed = 0x9e0feed5u;
};

/// Law of V_max = max_i V_i. Analytic when the source is independent
/// (F_max(x) is the product of the marginal CDFs, with a single-buyer model
/// delegating straight to its marginal); otherwise backed by a sorted store
/// of sampled maxima.
class MaxValueDistribution final : public Distribution {
public:
  explicit MaxValueDistribution(JointValuationModel source,
                                const MaxDistConfig& config = {});

  bool analytic() const { return store_.empty(); }
  const JointValuationModel& source() const { return source_; }

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
  const std::vector<double>* sample_store() const override;

  /// Fresh draw of V_max: quantile transform in analytic mode, resampling the
  /// store with replacement otherwise.
  double sample(Rng& rng) const;

private:
  const MarginalDistribution* single() const;

  JointValuationModel source_;
  std::vector<double> store_;  // sorted; empty in analytic mode
};

MaxValueDistribution max_distribution(const JointValuationModel& model,
                                      const MaxDistConfig& config = {});

}  // namespace georev
