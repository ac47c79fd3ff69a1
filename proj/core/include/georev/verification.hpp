#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "georev/analytics.hpp"
#include "georev/joint.hpp"

namespace georev {

enum class BoundId {
  MainTheorem,              // E_{r~F_max}[r P(V_max >= r)] >= G[V_max]/e
  MonopolyCorollary,        // monopoly revenue of F_max >= G[V_max]/e
  AnonymousReserveCorollary,// Vickrey + random anonymous reserve >= G/e
  ReplicationCorollary,     // Vickrey over model + replica >= 2G/e
  EfficiencyCorollary,      // welfare >= revenue >= G/e >= (c/e) E
  JensenInequality,         // G[V_max] <= E[V_max]
  LogSurvivalIdentity,      // E[log(1-F(X))] = -1 for atomless F
};

const char* bound_name(BoundId id);

/// Statistical verdicts use a 3-sigma band on the margin (4-sigma, two-sided,
/// for the identity check). When both sides are exact the band collapses to
/// an absolute tolerance of 1e-9. Vacuous and Rejected mark checks whose
/// hypothesis is empty or violated on this model; neither is a failure.
enum class Verdict { Holds, HoldsWithinError, Violated, Vacuous, Rejected };

const char* verdict_name(Verdict v);

/// One inequality of the efficiency chain.
struct ChainLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double sigma = 0.0;
  Verdict verdict = Verdict::Holds;
};

/// Auditable record of a single bound check.
struct BoundReport {
  BoundId bound = BoundId::MainTheorem;
  FunctionalResult lhs;
  FunctionalResult rhs;
  double margin = 0.0;  // lhs - rhs
  double sigma = 0.0;   // combined standard error behind the verdict
  Verdict verdict = Verdict::Holds;
  std::string model;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::string detail;            // set for Vacuous / Rejected
  std::vector<ChainLink> links;  // efficiency chain only
};

struct CheckOptions {
  std::size_t budget = 1'000'000;
  std::uint64_t seed = 0xC0FFEEu;
  unsigned workers = 0;
  /// Sample store size for non-independent models; 0 means budget.
  std::size_t store_budget = 0;
};

/// Shared verdict rule. sigma == 0 compares against the exact tolerance;
/// otherwise Holds needs margin > band*sigma, Violated margin < -band*sigma.
Verdict classify_margin(double margin, double sigma, double band = 3.0,
                        bool two_sided = false, double exact_tol = 1e-9);

BoundReport check_main_theorem(const JointValuationModel& model,
                               const CheckOptions& opts = {},
                               const MaxValueDistribution* fmax = nullptr);
BoundReport check_monopoly_corollary(const JointValuationModel& model,
                                     const CheckOptions& opts = {},
                                     const MaxValueDistribution* fmax = nullptr);
BoundReport check_anonymous_reserve_corollary(
    const JointValuationModel& model, const CheckOptions& opts = {},
    const MaxValueDistribution* fmax = nullptr);
BoundReport check_replication_corollary(const JointValuationModel& model,
                                        const CheckOptions& opts = {},
                                        const MaxValueDistribution* fmax = nullptr);
BoundReport check_efficiency_corollary(const JointValuationModel& model,
                                       const CheckOptions& opts = {},
                                       const MaxValueDistribution* fmax = nullptr);
BoundReport check_jensen(const JointValuationModel& model,
                         const CheckOptions& opts = {},
                         const MaxValueDistribution* fmax = nullptr);
BoundReport check_log_survival_identity(const JointValuationModel& model,
                                        const CheckOptions& opts = {},
                                        const MaxValueDistribution* fmax = nullptr);

/// Every applicable check for the model, in a fixed order. Each check owns a
/// seed lineage derived from opts.seed, so they may run concurrently without
/// changing any verdict.
std::vector<BoundReport> run_all_checks(const JointValuationModel& model,
                                        const CheckOptions& opts = {});

struct ZooEntry {
  std::string name;
  JointValuationModel model;
};

/// The standard verification zoo: parametric families crossed with buyer
/// counts n in {1, 2, 5} and mixture correlations rho in {0, 0.5, 1}.
/// 56 models in total.
std::vector<ZooEntry> standard_zoo();

}  // namespace georev
