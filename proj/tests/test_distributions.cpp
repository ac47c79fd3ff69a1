#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "georev/distributions.hpp"
#include "georev/joint.hpp"
#include "georev/rng.hpp"
#include "georev/verification.hpp"

using namespace georev;

namespace {

// Two-sample Kolmogorov-Smirnov statistic (both inputs get sorted).
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("cdf closed forms") {
  const MarginalDistribution pl(PowerLaw{2.0, 1.0});
  CHECK(pl.cdf(2.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(pl.cdf(1.0) == 0.0);
  CHECK(pl.cdf(0.5) == 0.0);

  const MarginalDistribution pm(PointMass{3.0});
  CHECK(pm.cdf(2.0) == 0.0);
  CHECK(pm.cdf(3.0) == 1.0);
  CHECK(pm.cdf_left(3.0) == 0.0);
  CHECK(pm.survival(3.0) == 1.0);

  const MarginalDistribution u(Uniform{0.0, 1.0});
  CHECK(u.cdf(0.4) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(u.cdf(-1.0) == 0.0);
  CHECK(u.cdf(2.0) == 1.0);
}

TEST_CASE("quantile closed forms and generalized inverse") {
  const MarginalDistribution pl(PowerLaw{1.0, 1.0});
  CHECK(pl.quantile(0.5) == doctest::Approx(2.0).epsilon(1e-15));

  const MarginalDistribution ex(Exponential{1.0});
  CHECK(ex.quantile(1.0 - std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-12));

  const MarginalDistribution emp(Empirical{{1.0, 2.0, 4.0}});
  // Independent oracle: brute-force infimum over a fine grid of the
  // generalized inverse definition.
  const auto oracle = [&](double u) {
    for (double x = 0.0; x <= 5.0; x += 1e-4)
      if (emp.cdf(x) >= u) return x;
    return 5.0;
  };
  CHECK(emp.quantile(0.5) == doctest::Approx(oracle(0.5)).epsilon(1e-3));
  CHECK(emp.quantile(0.5) == 2.0);
  CHECK(emp.quantile(0.3334) == doctest::Approx(oracle(0.3334)).epsilon(1e-3));
  CHECK(emp.quantile(0.1) == 1.0);
  CHECK(emp.quantile(0.99) == 4.0);

  CHECK_THROWS_AS((void)emp.quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)emp.quantile(1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)emp.quantile(-0.2), std::invalid_argument);
}

TEST_CASE("construction rejects invalid parameters") {
  CHECK_THROWS_AS(MarginalDistribution(PointMass{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution(PointMass{-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution(PowerLaw{0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution(PowerLaw{2.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution(Uniform{-0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution(Uniform{1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution(Exponential{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution(LogNormal{0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution(Empirical{{1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution(Empirical{{}}), std::invalid_argument);
  // Zero is allowed as a boundary carrying no mass.
  CHECK_NOTHROW(MarginalDistribution(Uniform{0.0, 2.0}));
}

TEST_CASE("quantile/cdf round trip on continuous families") {
  const std::vector<MarginalDistribution> dists = {
      MarginalDistribution(PowerLaw{2.5, 1.0}),
      MarginalDistribution(PowerLaw{1.0, 2.0}),
      MarginalDistribution(Exponential{1.3}),
      MarginalDistribution(Uniform{0.2, 3.0}),
      MarginalDistribution(LogNormal{0.3, 0.8}),
  };
  Rng rng(31337);
  for (const auto& d : dists) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.uniform();
      worst = std::max(worst, std::abs(d.cdf(d.quantile(u)) - u));
    }
    CHECK_MESSAGE(worst <= 1e-9, d.describe());
  }
}

TEST_CASE("cdf is monotone, bounded, and anchored to the support") {
  const std::vector<MarginalDistribution> dists = {
      MarginalDistribution(PowerLaw{1.0}),
      MarginalDistribution(PowerLaw{3.2, 0.5}),
      MarginalDistribution(Exponential{2.0}),
      MarginalDistribution(Uniform{0.0, 2.0}),
      MarginalDistribution(PointMass{1.5}),
      MarginalDistribution(LogNormal{-0.2, 1.1}),
      MarginalDistribution(Empirical{{0.3, 0.3, 1.0, 7.0}}),
  };
  Rng rng(246);
  for (const auto& d : dists) {
    CHECK(d.cdf(d.support_lo() - 0.5) == 0.0);
    if (std::isfinite(d.support_hi())) CHECK(d.cdf(d.support_hi()) == 1.0);
    for (int i = 0; i < 300; ++i) {
      double x1 = d.quantile(rng.uniform()) * (0.5 + rng.uniform());
      double x2 = x1 + 2.0 * rng.uniform();
      const double f1 = d.cdf(x1), f2 = d.cdf(x2);
      CHECK(f1 >= 0.0);
      CHECK(f2 <= 1.0);
      CHECK(f1 <= f2);
      CHECK(d.cdf_left(x1) <= f1);
      CHECK(d.survival(x1) == doctest::Approx(1.0 - d.cdf_left(x1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("quantile of cdf never overshoots") {
  const std::vector<MarginalDistribution> dists = {
      MarginalDistribution(PowerLaw{2.0}),
      MarginalDistribution(Exponential{0.7}),
      MarginalDistribution(Uniform{0.1, 4.0}),
      MarginalDistribution(PointMass{2.0}),
      MarginalDistribution(LogNormal{0.0, 1.0}),
      MarginalDistribution(Empirical{{1.0, 2.0, 2.0, 5.0}}),
  };
  Rng rng(99);
  for (const auto& d : dists) {
    for (int i = 0; i < 300; ++i) {
      const double x = d.sample(rng) * (0.75 + 0.5 * rng.uniform());
      const double u = d.cdf(x);
      if (u > 0.0 && u < 1.0)
        CHECK_MESSAGE(d.quantile(u) <= x + 1e-9, d.describe());
    }
  }
}

TEST_CASE("profiles have the right length and stay positive across the zoo") {
  Rng rng(1001);
  for (const auto& entry : standard_zoo()) {
    std::vector<double> profile(entry.model.buyer_count());
    for (int i = 0; i < 200; ++i) {
      entry.model.sample_profile(rng, profile);
      for (double v : profile) REQUIRE(v > 0.0);
    }
    std::vector<double> wrong(profile.size() + 1);
    CHECK_THROWS_AS(entry.model.sample_profile(rng, wrong),
                    std::invalid_argument);
  }
}

TEST_CASE("degenerate and perfectly coupled profiles") {
  auto degenerate = JointValuationModel::independent(
      {MarginalDistribution(PointMass{2.0}), MarginalDistribution(PointMass{5.0})});
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto p = degenerate.sample_profile(rng);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == 2.0);
    CHECK(p[1] == 5.0);
  }

  auto coupled = JointValuationModel::common_value_mixture(
      1.0, MarginalDistribution(Uniform{0.0, 1.0}), 4);
  for (int i = 0; i < 50; ++i) {
    const auto p = coupled.sample_profile(rng);
    REQUIRE(p.size() == 4);
    CHECK(p[0] == p[1]);
    CHECK(p[1] == p[2]);
    CHECK(p[2] == p[3]);
    CHECK(p[0] > 0.0);
  }
}

TEST_CASE("replicated blocks are independent") {
  auto rep = JointValuationModel::replicated(
      JointValuationModel::iid(MarginalDistribution(Uniform{0.0, 1.0}), 1));
  CHECK(rep.buyer_count() == 2);
  Rng rng(4242);
  std::vector<double> left, right;
  for (int i = 0; i < 100000; ++i) {
    const auto p = rep.sample_profile(rng);
    left.push_back(p[0]);
    right.push_back(p[1]);
  }
  CHECK(std::abs(pearson_correlation(left, right)) < 0.01);
}

TEST_CASE("replicated halves are exchangeable (two-sample KS)") {
  auto inner = JointValuationModel::independent(
      {MarginalDistribution(Uniform{0.0, 1.0}),
       MarginalDistribution(Exponential{1.0})});
  auto rep = JointValuationModel::replicated(inner);
  Rng rng(777);
  const std::size_t draws = 100000;
  std::vector<double> max_a(draws), max_b(draws);
  std::vector<double> profile(rep.buyer_count());
  for (std::size_t i = 0; i < draws; ++i) {
    rep.sample_profile(rng, profile);
    max_a[i] = std::max(profile[0], profile[1]);
    max_b[i] = std::max(profile[2], profile[3]);
  }
  const double d = ks_two_sample(max_a, max_b);
  // 1% critical value: 1.628 * sqrt((n+m)/(n m)).
  const double crit = 1.628 * std::sqrt(2.0 / static_cast<double>(draws));
  CHECK(d < crit);
}

TEST_CASE("analytic max is the product of marginal cdfs") {
  auto two_uniform = JointValuationModel::iid(
      MarginalDistribution(Uniform{0.0, 1.0}), 2);
  const MaxValueDistribution fmax(two_uniform);
  CHECK(fmax.analytic());
  for (double x : {0.1, 0.25, 0.5, 0.9, 0.999}) {
    CHECK(fmax.cdf(x) == doctest::Approx(x * x).epsilon(1e-15));
  }

  auto mixed = JointValuationModel::independent(
      {MarginalDistribution(PowerLaw{2.0}), MarginalDistribution(Exponential{0.5}),
       MarginalDistribution(LogNormal{0.0, 1.0})});
  const MaxValueDistribution fm(mixed);
  const auto& ms = mixed.marginals();
  for (double x : {0.5, 1.5, 2.0, 7.0, 40.0}) {
    const double oracle = ms[0].cdf(x) * ms[1].cdf(x) * ms[2].cdf(x);
    CHECK(fm.cdf(x) == doctest::Approx(oracle).epsilon(1e-15));
  }
}

TEST_CASE("analytic max quantile inverts the product cdf") {
  auto model = JointValuationModel::independent(
      {MarginalDistribution(PowerLaw{2.0}), MarginalDistribution(PowerLaw{2.0})});
  const MaxValueDistribution fmax(model);
  Rng rng(5150);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double u = rng.uniform();
    worst = std::max(worst, std::abs(fmax.cdf(fmax.quantile(u)) - u));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("single-buyer max delegates to its marginal") {
  auto model = JointValuationModel::iid(MarginalDistribution(PowerLaw{3.0}), 1);
  const MaxValueDistribution fmax(model);
  CHECK(fmax.analytic());
  CHECK(fmax.log_mean_closed_form().has_value());
  CHECK(*fmax.log_mean_closed_form() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(fmax.quantile(0.5) == doctest::Approx(std::pow(0.5, -1.0 / 3.0)).epsilon(1e-15));
  CHECK(fmax.survival(2.0) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("analytic max over a product with atoms") {
  // max(2, U(0,1)) is the point mass at 2.
  auto dominated = JointValuationModel::independent(
      {MarginalDistribution(PointMass{2.0}), MarginalDistribution(Uniform{0.0, 1.0})});
  const MaxValueDistribution fm(dominated);
  CHECK(fm.analytic());
  CHECK(!fm.atomless());
  CHECK(fm.cdf(1.99) == 0.0);
  CHECK(fm.cdf(2.0) == 1.0);
  CHECK(fm.cdf_left(2.0) == 0.0);
  CHECK(fm.survival(2.0) == 1.0);
  CHECK(fm.quantile(0.3) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fm.quantile(0.99) == doctest::Approx(2.0).epsilon(1e-12));

  // max(PointMass(0.5), U(0,1)) keeps a genuine mixed law: an atom of mass
  // 1/2 at 0.5 plus the uniform tail above it.
  auto mixed = JointValuationModel::independent(
      {MarginalDistribution(PointMass{0.5}), MarginalDistribution(Uniform{0.0, 1.0})});
  const MaxValueDistribution mx(mixed);
  CHECK(mx.cdf(0.4) == 0.0);
  CHECK(mx.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mx.cdf_left(0.5) == 0.0);
  CHECK(mx.cdf(0.75) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(mx.survival(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mx.survival(0.75) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(mx.quantile(0.3) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(mx.quantile(0.9) == doctest::Approx(0.9).epsilon(1e-9));

  // Monte Carlo draws of the same model agree with the analytic atom mass.
  Rng rng(8);
  std::vector<double> profile(2);
  int at_atom = 0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    mixed.sample_profile(rng, profile);
    if (std::max(profile[0], profile[1]) == 0.5) ++at_atom;
  }
  CHECK(static_cast<double>(at_atom) / draws == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("analytic max quantile is monotone") {
  auto model = JointValuationModel::independent(
      {MarginalDistribution(Exponential{0.8}),
       MarginalDistribution(LogNormal{0.0, 0.6}),
       MarginalDistribution(Uniform{0.5, 1.5})});
  const MaxValueDistribution fm(model);
  double prev = 0.0;
  for (int i = 1; i < 400; ++i) {
    const double q = fm.quantile(i / 400.0);
    CHECK(q >= prev);
    prev = q;
  }
}

TEST_CASE("sample-backed empirical max cdf converges to the analytic one") {
  // rho = 0 mixture is i.i.d. in law, but structurally sample-backed; the
  // independent oracle is F(x)^n.
  const MarginalDistribution base(PowerLaw{2.0});
  auto model = JointValuationModel::common_value_mixture(0.0, base, 2);
  MaxDistConfig cfg;
  cfg.sample_budget = 1'000'000;
  cfg.seed = 2468;
  const MaxValueDistribution fmax(model, cfg);
  CHECK(!fmax.analytic());
  REQUIRE(fmax.sample_store() != nullptr);

  const auto& store = *fmax.sample_store();
  double sup = 0.0;
  for (std::size_t i = 0; i < store.size(); i += 97) {
    const double truth = std::pow(base.cdf(store[i]), 2.0);
    const double ecdf_hi = static_cast<double>(i + 1) / static_cast<double>(store.size());
    const double ecdf_lo = static_cast<double>(i) / static_cast<double>(store.size());
    sup = std::max(sup, std::max(std::abs(ecdf_hi - truth), std::abs(ecdf_lo - truth)));
  }
  CHECK(sup < 0.005);
}

TEST_CASE("fully coupled mixture max equals the base law") {
  const MarginalDistribution base(Exponential{1.0});
  auto model = JointValuationModel::common_value_mixture(1.0, base, 5);
  MaxDistConfig cfg;
  cfg.sample_budget = 200'000;
  cfg.seed = 13;
  const MaxValueDistribution fmax(model, cfg);
  for (double x : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    CHECK(fmax.cdf(x) == doctest::Approx(base.cdf(x)).epsilon(0.02));
  }
}

TEST_CASE("max distribution store build is deterministic in the seed") {
  auto model = JointValuationModel::common_value_mixture(
      0.5, MarginalDistribution(LogNormal{0.0, 1.0}), 3);
  MaxDistConfig cfg;
  cfg.sample_budget = 10'000;
  cfg.seed = 321;
  const MaxValueDistribution a(model, cfg);
  const MaxValueDistribution b(model, cfg);
  REQUIRE(a.sample_store() != nullptr);
  CHECK(*a.sample_store() == *b.sample_store());
}

TEST_CASE("scaled marginals transform their support and moments") {
  const MarginalDistribution d(Uniform{0.5, 2.0});
  const auto s = d.scaled(3.0);
  CHECK(s.support_lo() == doctest::Approx(1.5));
  CHECK(s.support_hi() == doctest::Approx(6.0));
  CHECK(*s.mean_closed_form() == doctest::Approx(3.0 * *d.mean_closed_form()));
  CHECK(*s.log_mean_closed_form() ==
        doctest::Approx(std::log(3.0) + *d.log_mean_closed_form()));
}
