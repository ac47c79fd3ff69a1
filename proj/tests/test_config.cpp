#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "georev/model_config.hpp"

using namespace georev;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path =
      (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("family specs parse and build") {
  const auto pl = parse_family_spec("powerlaw m=2 scale=1.5");
  CHECK(pl.name == "powerlaw");
  CHECK(pl.params.at("m") == 2.0);
  const auto d = pl.build();
  CHECK(d.support_lo() == 1.5);

  CHECK(parse_family_spec("exponential rate=2").build().describe() ==
        "exponential(rate=2)");
  CHECK(parse_family_spec("uniform lo=0 hi=3").build().support_hi() == 3.0);
  CHECK(parse_family_spec("pointmass value=4").build().quantile(0.3) == 4.0);
  CHECK(parse_family_spec("pointmass v=4").build().quantile(0.3) == 4.0);
  CHECK(parse_family_spec("lognormal mu=0 sigma=1").build().atomless());

  CHECK_THROWS_AS(parse_family_spec("powrlaw m=2").build(), std::invalid_argument);
  CHECK_THROWS_AS(parse_family_spec("powerlaw m=abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family_spec("powerlaw m"), std::invalid_argument);
}

TEST_CASE("with_param overrides one key") {
  const auto pl = parse_family_spec("powerlaw m=2");
  const auto pl4 = pl.with_param("m", 4.0);
  CHECK(pl4.params.at("m") == 4.0);
  CHECK(pl.params.at("m") == 2.0);
}

TEST_CASE("sweep ranges parse") {
  const auto r = parse_sweep_range("1.1:5:0.05");
  CHECK(r.lo == 1.1);
  CHECK(r.hi == 5.0);
  CHECK(r.step == 0.05);
  CHECK_THROWS_AS(parse_sweep_range("1.1:5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sweep_range("5:1:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sweep_range("1:5:0"), std::invalid_argument);
}

TEST_CASE("full config text round trip") {
  const std::string text = R"(
# experiment
structure = independent
marginal  = powerlaw m=2
n         = 3          # three i.i.d. copies
command   = analyze
seed      = 99
samples   = 50000
format    = csv
threads   = 2
)";
  const auto cfg = parse_config_text(text, "inline");
  CHECK(cfg.command == Command::Analyze);
  CHECK(cfg.seed == 99);
  CHECK(cfg.samples == 50000);
  CHECK(cfg.format == OutputFormat::Csv);
  CHECK(cfg.threads == 2);
  const auto model = cfg.build_model();
  CHECK(model.is_independent());
  CHECK(model.buyer_count() == 3);
}

TEST_CASE("mixture and replicated structures build") {
  const auto cfg = parse_config_text(R"(
structure = mixture
base      = exponential rate=1
rho       = 0.7
n         = 4
)",
                                     "inline");
  const auto model = cfg.build_model();
  CHECK(model.is_mixture());
  CHECK(model.buyer_count() == 4);
  CHECK(model.mixture_rho() == 0.7);

  const auto rep_cfg = parse_config_text(R"(
structure = independent
marginal  = uniform lo=0 hi=1
replicate = true
)",
                                         "inline");
  const auto rep = rep_cfg.build_model();
  CHECK(rep.is_replicated());
  CHECK(rep.buyer_count() == 2);
}

TEST_CASE("mechanism and price sources parse") {
  const auto cfg = parse_config_text(R"(
marginal  = uniform lo=0 hi=1
mechanism = second-price-reserve
reserve   = random-from-max
)",
                                     "inline");
  REQUIRE(cfg.mechanism.has_value());
  CHECK(*cfg.mechanism == MechanismKind::SecondPriceReserve);
  REQUIRE(cfg.price_source.has_value());
  CHECK(std::holds_alternative<RandomFromMax>(*cfg.price_source));

  const auto fixed = parse_config_text("price = fixed 0.5\nmarginal = uniform\n",
                                       "inline");
  REQUIRE(fixed.price_source.has_value());
  CHECK(std::get<FixedPrice>(*fixed.price_source).value == 0.5);
}

TEST_CASE("config errors carry file, line, and field") {
  try {
    parse_config_text("structure = independent\nrho = 1.5\n", "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.field() == "rho");
    CHECK(std::string(e.what()).find("bad.cfg:2") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config_text("nonsense-line\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("frobnicate = 3\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n = 2.5\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("format = yaml\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("marginal = powerlaw m=oops\n", "x"),
                  ConfigError);
}

TEST_CASE("model build errors are explicit") {
  CHECK_THROWS_AS(parse_config_text("structure = mixture\n", "x").build_model(),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("structure = independent\n", "x").build_model(),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text(
                      "marginal = uniform\nmarginal = uniform\nn = 3\n", "x")
                      .build_model(),
                  std::invalid_argument);
}

TEST_CASE("empirical families load newline-delimited values") {
  const auto good = write_temp("georev_emp_good.txt",
                               "# comment\n1.5\n2.0\n\n0.25\n");
  const auto cfg = parse_config_text("marginal = empirical file=" + good + "\n",
                                     "inline");
  const auto model = cfg.build_model();
  CHECK(model.marginals().front().support_lo() == 0.25);
  CHECK(model.marginals().front().support_hi() == 2.0);

  const auto bad = write_temp("georev_emp_bad.txt", "1.0\nnot-a-number\n");
  try {
    (void)parse_family_spec("empirical file=" + bad).build();
    FAIL("expected parse failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }

  const auto neg = write_temp("georev_emp_neg.txt", "1.0\n-3\n");
  CHECK_THROWS_AS(parse_family_spec("empirical file=" + neg).build(),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_family_spec("empirical file=/no/such/file").build(),
                  std::runtime_error);
}
