#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "georev/report_io.hpp"
#include "georev/verification.hpp"

using namespace georev;

namespace {

constexpr double kE = std::numbers::e;

JointValuationModel single(Family f) {
  return JointValuationModel::iid(MarginalDistribution(std::move(f)), 1);
}

CheckOptions quick(std::size_t budget = 200'000, std::uint64_t seed = 404) {
  CheckOptions opts;
  opts.budget = budget;
  opts.seed = seed;
  return opts;
}

}  // namespace

TEST_CASE("margin classification bands") {
  // Exact sides use the absolute tolerance.
  CHECK(classify_margin(0.5, 0.0) == Verdict::Holds);
  CHECK(classify_margin(0.0, 0.0) == Verdict::HoldsWithinError);
  CHECK(classify_margin(5e-10, 0.0) == Verdict::HoldsWithinError);
  CHECK(classify_margin(-5e-10, 0.0) == Verdict::HoldsWithinError);
  CHECK(classify_margin(-1e-6, 0.0) == Verdict::Violated);

  // Statistical sides use the 3-sigma band.
  CHECK(classify_margin(1.0, 0.1) == Verdict::Holds);
  CHECK(classify_margin(0.2, 0.1) == Verdict::HoldsWithinError);
  CHECK(classify_margin(-0.2, 0.1) == Verdict::HoldsWithinError);
  CHECK(classify_margin(-0.5, 0.1) == Verdict::Violated);

  // Two-sided identity band.
  CHECK(classify_margin(0.05, 0.1, 4.0, true) == Verdict::HoldsWithinError);
  CHECK(classify_margin(0.5, 0.1, 4.0, true) == Verdict::Violated);
  CHECK(classify_margin(-0.5, 0.1, 4.0, true) == Verdict::Violated);

  const double inf = std::numeric_limits<double>::infinity();
  CHECK(classify_margin(inf, 0.0) == Verdict::Holds);
  CHECK(classify_margin(inf, 1.0) == Verdict::Holds);
}

TEST_CASE("main theorem is tight on the equal-revenue law") {
  const auto rep = check_main_theorem(single(PowerLaw{1.0}));
  CHECK(rep.lhs.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.rhs.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(rep.margin) < 1e-6);
  CHECK(rep.verdict == Verdict::HoldsWithinError);
}

TEST_CASE("main theorem on two uniforms and on a point mass") {
  auto two_u = JointValuationModel::iid(MarginalDistribution(Uniform{0.0, 1.0}), 2);
  const auto rep = check_main_theorem(two_u);
  CHECK(rep.lhs.value == doctest::Approx(4.0 / 15.0).epsilon(1e-8));
  CHECK(rep.rhs.value == doctest::Approx(std::exp(-0.5) / kE).epsilon(1e-8));
  CHECK(rep.verdict == Verdict::Holds);

  const auto pm = check_main_theorem(single(PointMass{5.0}));
  CHECK(pm.lhs.value == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(pm.rhs.value == doctest::Approx(5.0 / kE).epsilon(1e-9));
  CHECK(pm.verdict == Verdict::Holds);
}

TEST_CASE("monopoly corollary and its ordering above the random price") {
  const auto uni = check_monopoly_corollary(single(Uniform{0.0, 1.0}));
  CHECK(uni.lhs.value == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(uni.rhs.value == doctest::Approx(std::exp(-1.0) / kE).epsilon(1e-9));
  CHECK(uni.verdict == Verdict::Holds);

  const auto pl = check_monopoly_corollary(single(PowerLaw{2.0}));
  CHECK(pl.lhs.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pl.rhs.value == doctest::Approx(std::exp(0.5) / kE).epsilon(1e-9));
  CHECK(pl.verdict == Verdict::Holds);

  const auto pm = check_monopoly_corollary(single(PointMass{5.0}));
  CHECK(pm.lhs.value == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(pm.verdict == Verdict::Holds);

  // The optimal price beats the random price on every model checked here.
  for (const auto& model :
       {single(Uniform{0.0, 1.0}), single(Exponential{1.0}),
        JointValuationModel::iid(MarginalDistribution(Uniform{0.0, 1.0}), 2)}) {
    const auto mono = check_monopoly_corollary(model);
    const auto main = check_main_theorem(model);
    CHECK(mono.lhs.value >= main.lhs.value - 1e-9);
  }
}

TEST_CASE("anonymous reserve corollary") {
  const auto uni = check_anonymous_reserve_corollary(single(Uniform{0.0, 1.0}),
                                                     quick(400'000));
  CHECK(std::abs(uni.lhs.value - 1.0 / 6.0) < 4.0 * uni.lhs.std_err);
  CHECK(uni.rhs.value == doctest::Approx(std::exp(-1.0) / kE).epsilon(1e-9));
  CHECK(uni.verdict == Verdict::Holds);

  auto mix = JointValuationModel::common_value_mixture(
      0.5, MarginalDistribution(PowerLaw{2.0}), 3);
  const auto correlated = check_anonymous_reserve_corollary(mix, quick());
  CHECK(correlated.verdict == Verdict::Holds);

  auto coupled_pm = JointValuationModel::common_value_mixture(
      1.0, MarginalDistribution(PointMass{4.0}), 3);
  const auto trivial = check_anonymous_reserve_corollary(coupled_pm, quick(50'000));
  CHECK(trivial.lhs.value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(trivial.verdict == Verdict::Holds);
}

TEST_CASE("replication corollary") {
  const auto uni = check_replication_corollary(single(Uniform{0.0, 1.0}),
                                               quick(400'000));
  CHECK(std::abs(uni.lhs.value - 1.0 / 3.0) < 4.0 * uni.lhs.std_err);
  CHECK(uni.rhs.value ==
        doctest::Approx(2.0 / kE * std::exp(-1.0)).epsilon(1e-9));
  CHECK(uni.verdict == Verdict::Holds);

  const auto pm = check_replication_corollary(single(PointMass{3.0}), quick(50'000));
  CHECK(pm.lhs.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(pm.rhs.value == doctest::Approx(6.0 / kE).epsilon(1e-12));
  CHECK(pm.verdict == Verdict::Holds);

  auto two_pl = JointValuationModel::iid(MarginalDistribution(PowerLaw{2.0}), 2);
  const auto pl = check_replication_corollary(two_pl, quick(400'000));
  CHECK(pl.verdict == Verdict::Holds);
}

TEST_CASE("efficiency corollary chain") {
  const auto pl4 = check_efficiency_corollary(single(PowerLaw{4.0}), quick(400'000));
  REQUIRE(pl4.links.size() == 3);
  CHECK(pl4.verdict != Verdict::Violated);
  // c = 0.963 to three decimals; the final floor is (c/e) * 4/3.
  const double c = std::exp(0.25) * 0.75;
  CHECK(pl4.rhs.value == doctest::Approx(c / kE * 4.0 / 3.0).epsilon(1e-6));

  const auto pm = check_efficiency_corollary(single(PointMass{2.0}), quick(50'000));
  CHECK(pm.verdict != Verdict::Violated);
  CHECK(pm.links[0].margin == doctest::Approx(0.0).epsilon(1e-12));

  auto two_u = JointValuationModel::iid(MarginalDistribution(Uniform{0.0, 1.0}), 2);
  const auto uu = check_efficiency_corollary(two_u, quick(400'000));
  // Realized welfare of posting a random F_max price to two uniform buyers:
  // the price goes to the first buyer clearing it, so
  // E[w] = E[v1 1(v1>=r)] + E[v2 1(v1<r<=v2)] = 1/4 + 2/15 = 23/60.
  CHECK(std::abs(uu.links[0].lhs - 23.0 / 60.0) < 4.0 * uu.lhs.std_err);
  CHECK(std::abs(uu.links[1].lhs - 4.0 / 15.0) < 4.0 * uu.links[1].sigma);
  CHECK(uu.links[1].rhs == doctest::Approx(std::exp(-0.5) / kE).epsilon(1e-6));
  // The chain still ends at (c/e) E[V_max] with E = 2/3 and c = G/E.
  CHECK(uu.rhs.value ==
        doctest::Approx(std::exp(-0.5) / kE).epsilon(1e-6));
  CHECK(uu.verdict != Verdict::Violated);

  // Infinite mean: vacuous, not skipped silently.
  const auto vac = check_efficiency_corollary(single(PowerLaw{1.0}), quick(50'000));
  CHECK(vac.verdict == Verdict::Vacuous);
  CHECK(!vac.detail.empty());
}

TEST_CASE("jensen inequality check") {
  const auto inf_case = check_jensen(single(PowerLaw{1.0}));
  CHECK(inf_case.lhs.is_infinite());
  CHECK(inf_case.verdict == Verdict::Holds);

  const auto pm = check_jensen(single(PointMass{9.0}));
  CHECK(pm.margin == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pm.verdict == Verdict::HoldsWithinError);

  const auto ln = check_jensen(single(LogNormal{0.0, 1.0}));
  CHECK(ln.lhs.value == doctest::Approx(std::exp(0.5)).epsilon(1e-9));
  CHECK(ln.rhs.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ln.verdict == Verdict::Holds);
}

TEST_CASE("log survival identity check") {
  const auto uni = check_log_survival_identity(single(Uniform{0.0, 1.0}),
                                               quick(1'000'000));
  CHECK(uni.verdict == Verdict::HoldsWithinError);
  CHECK(std::abs(uni.lhs.value + 1.0) < 0.004);

  const auto atom = check_log_survival_identity(single(PointMass{2.0}), quick());
  CHECK(atom.verdict == Verdict::Rejected);
  CHECK(!atom.detail.empty());

  auto mix = JointValuationModel::common_value_mixture(
      0.5, MarginalDistribution(Uniform{0.0, 1.0}), 2);
  const auto backed = check_log_survival_identity(mix, quick(50'000));
  CHECK(backed.verdict == Verdict::Rejected);
}

TEST_CASE("anonymous reserve dominates posting the same random price") {
  // The Vickrey payment floors at the reserve, so switching from posting the
  // random price to running the auction with it as reserve cannot lose.
  for (const auto& model :
       {JointValuationModel::iid(MarginalDistribution(Uniform{0.0, 1.0}), 3),
        JointValuationModel::common_value_mixture(
            0.5, MarginalDistribution(Exponential{1.0}), 2)}) {
    MaxDistConfig mcfg;
    mcfg.sample_budget = 200'000;
    mcfg.seed = 55;
    const MaxValueDistribution fmax(model, mcfg);
    EstimateOptions opts;
    opts.budget = 400'000;
    opts.seed = 56;
    const auto posted = estimate_revenue(
        MechanismSpec{MechanismKind::PostedPrice, RandomFromMax{}}, model, opts,
        &fmax);
    const auto vickrey = estimate_revenue(
        MechanismSpec{MechanismKind::SecondPriceReserve, RandomFromMax{}},
        model, opts, &fmax);
    const double sigma = std::hypot(posted.std_err, vickrey.std_err);
    CHECK(vickrey.mean >= posted.mean - 4.0 * sigma);
  }
}

TEST_CASE("run_all_checks covers every bound once") {
  auto model = JointValuationModel::iid(MarginalDistribution(Exponential{1.0}), 1);
  const auto reports = run_all_checks(model, quick(100'000));
  REQUIRE(reports.size() == 7);
  std::set<std::string> names;
  for (const auto& r : reports) {
    names.insert(bound_name(r.bound));
    CHECK(r.verdict != Verdict::Violated);
    CHECK(r.model == model.describe());
  }
  CHECK(names.size() == 7);
}

TEST_CASE("the standard zoo is broad and sound at a smoke budget") {
  const auto zoo = standard_zoo();
  CHECK(zoo.size() >= 50);
  std::set<std::string> names;
  for (const auto& e : zoo) names.insert(e.name);
  CHECK(names.size() == zoo.size());

  // No bound may come back Violated anywhere; the theorems are unconditional.
  const auto opts = quick(50'000, 31);
  std::size_t violated = 0;
  for (const auto& e : zoo)
    for (const auto& r : run_all_checks(e.model, opts))
      violated += r.verdict == Verdict::Violated ? 1 : 0;
  CHECK(violated == 0);
}

TEST_CASE("bound reports serialize with stable field names") {
  const auto rep = check_main_theorem(single(Uniform{0.0, 1.0}));
  const auto j = report::to_json(rep);
  CHECK(j.at("bound") == "main_theorem");
  CHECK(j.at("verdict") == "holds");
  CHECK(j.at("lhs").at("method") == "quadrature");
  CHECK(j.at("lhs").at("value").is_number());
  CHECK(j.contains("margin"));
  CHECK(j.contains("sigma"));
  CHECK(j.contains("model"));

  const auto doc = report::report_document({rep});
  CHECK(doc.at("schema_version") == report::kSchemaVersion);
  CHECK(doc.at("checks").size() == 1);

  // Infinities serialize as strings, not invalid JSON.
  const auto jensen_inf = check_jensen(single(PowerLaw{1.0}));
  const auto ji = report::to_json(jensen_inf);
  CHECK(ji.at("lhs").at("value") == "inf");
  CHECK(ji.at("margin") == "inf");

  const auto csv = report::reports_to_csv({rep});
  CHECK(csv.find("model,bound,verdict") == 0);
  CHECK(csv.find("main_theorem") != std::string::npos);
}
