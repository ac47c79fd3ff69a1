#include <benchmark/benchmark.h>

#include <cmath>

#include "georev/analytics.hpp"
#include "georev/mechanisms.hpp"
#include "georev/rng.hpp"
#include "georev/verification.hpp"

using namespace georev;

static void BM_QuantilePowerLaw(benchmark::State& state) {
  const MarginalDistribution d(PowerLaw{2.0});
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(d.quantile(rng.uniform()));
}
BENCHMARK(BM_QuantilePowerLaw);

static void BM_QuantileLogNormal(benchmark::State& state) {
  const MarginalDistribution d(LogNormal{0.0, 1.0});
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(d.quantile(rng.uniform()));
}
BENCHMARK(BM_QuantileLogNormal);

static void BM_ProductMaxQuantile(benchmark::State& state) {
  const auto model = JointValuationModel::iid(
      MarginalDistribution(PowerLaw{2.0}), state.range(0));
  const MaxValueDistribution fmax(model);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(fmax.quantile(rng.uniform()));
}
BENCHMARK(BM_ProductMaxQuantile)->Arg(2)->Arg(8);

static void BM_SampleBackedStoreBuild(benchmark::State& state) {
  const auto model = JointValuationModel::common_value_mixture(
      0.5, MarginalDistribution(Exponential{1.0}), 3);
  MaxDistConfig cfg;
  cfg.sample_budget = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    cfg.seed += 1;
    benchmark::DoNotOptimize(MaxValueDistribution(model, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleBackedStoreBuild)->Arg(10000)->Arg(100000);

static void BM_GeometricExpectationQuadrature(benchmark::State& state) {
  const auto model = JointValuationModel::iid(
      MarginalDistribution(Uniform{0.0, 1.0}), 2);
  const MaxValueDistribution fmax(model);
  for (auto _ : state)
    benchmark::DoNotOptimize(geometric_expectation(fmax, Method::Quadrature));
}
BENCHMARK(BM_GeometricExpectationQuadrature);

static void BM_EstimateRevenueVickrey(benchmark::State& state) {
  const auto model = JointValuationModel::common_value_mixture(
      0.5, MarginalDistribution(PowerLaw{2.0}), 3);
  EstimateOptions opts;
  opts.budget = static_cast<std::size_t>(state.range(0));
  opts.workers = 1;
  const MechanismSpec mech{MechanismKind::SecondPriceReserve, RandomFromMax{}};
  for (auto _ : state) {
    opts.seed += 1;
    benchmark::DoNotOptimize(estimate_revenue(mech, model, opts));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateRevenueVickrey)->Arg(10000)->Arg(100000);

static void BM_CheckMainTheoremAnalytic(benchmark::State& state) {
  const auto model = JointValuationModel::iid(
      MarginalDistribution(PowerLaw{2.0}), 2);
  for (auto _ : state) benchmark::DoNotOptimize(check_main_theorem(model));
}
BENCHMARK(BM_CheckMainTheoremAnalytic);

BENCHMARK_MAIN();
