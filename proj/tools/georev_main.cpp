// georev: analyze, simulate, verify, and sweep revenue guarantees for
// posted-price and second-price mechanisms over configurable valuation
// models. See README for the config schema and output formats.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "georev/analytics.hpp"
#include "georev/mechanisms.hpp"
#include "georev/model_config.hpp"
#include "georev/report_io.hpp"
#include "georev/verification.hpp"

namespace {

using nlohmann::ordered_json;
using namespace georev;

constexpr int kExitOk = 0;
constexpr int kExitRuntimeOrViolation = 1;
constexpr int kExitUsage = 2;

constexpr double kInvE = 1.0 / std::numbers::e;
const double kEOver4 = std::numbers::e / 4.0;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::string> param_range;
  std::optional<std::string> sweep_param;
  std::optional<std::string> mechanism;
  std::optional<std::string> price;
  bool zoo = false;
};

ExperimentConfig merged_config(const Overrides& ov) {
  ExperimentConfig cfg;
  if (!ov.config_path.empty()) {
    try {
      cfg = parse_config_file(ov.config_path);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      // An unreadable config is a usage problem, not a runtime failure.
      throw std::invalid_argument(e.what());
    }
  }
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.samples) cfg.samples = *ov.samples;
  if (ov.format) cfg.format = parse_format(*ov.format);
  if (ov.out) cfg.out_path = *ov.out;
  if (ov.threads) cfg.threads = *ov.threads;
  if (ov.param_range) cfg.range = parse_sweep_range(*ov.param_range);
  if (ov.sweep_param) cfg.sweep_param = *ov.sweep_param;
  if (ov.mechanism) {
    const auto m = *ov.mechanism;
    if (m == "posted-price")
      cfg.mechanism = MechanismKind::PostedPrice;
    else if (m == "second-price-reserve")
      cfg.mechanism = MechanismKind::SecondPriceReserve;
    else if (m == "second-price-replicated")
      cfg.mechanism = MechanismKind::SecondPriceReplicated;
    else
      throw std::invalid_argument("unknown mechanism '" + m + "'");
  }
  if (ov.price) {
    std::istringstream in(*ov.price);
    std::string kind;
    in >> kind;
    if (kind == "fixed") {
      double p = 0.0;
      if (!(in >> p))
        throw std::invalid_argument("--price fixed needs a numeric value");
      cfg.price_source = FixedPrice{p};
    } else if (kind == "random-from-max") {
      cfg.price_source = RandomFromMax{};
    } else {
      throw std::invalid_argument(
          "--price expects 'fixed P' or 'random-from-max'");
    }
  }
  return cfg;
}

class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

std::string table_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeRow {
  std::string model;
  std::size_t n = 0;
  FunctionalResult mean;
  FunctionalResult geo;
  FunctionalResult ratio;
  MonopolyPriceResult monopoly;
  FunctionalResult random_reserve;
  double geo_over_e = 0.0;
  double welfare_floor = 0.0;  // (c/e) * E
};

AnalyzeRow compute_analyze_row(const JointValuationModel& model,
                               std::uint64_t seed, std::size_t samples,
                               unsigned threads) {
  AnalyzeRow row;
  row.model = model.describe();
  row.n = model.buyer_count();

  MaxDistConfig mcfg;
  mcfg.sample_budget = samples;
  mcfg.seed = derive_seed(seed, 1);
  const MaxValueDistribution fmax(model, mcfg);

  const McOptions mc{samples, derive_seed(seed, 2), threads};
  row.mean = expectation(fmax, std::nullopt, mc);
  row.geo = geometric_expectation(fmax, std::nullopt, mc);
  row.ratio = concentration_ratio(fmax, std::nullopt, mc);
  row.monopoly = monopoly_price(fmax);
  row.random_reserve = random_reserve_revenue(fmax, mc);
  row.geo_over_e = row.geo.value * kInvE;
  row.welfare_floor = row.mean.is_infinite()
                          ? 0.0
                          : row.ratio.value * row.mean.value * kInvE;
  return row;
}

const char* kAnalyzeCsvHeader =
    "model,n,expectation,expectation_std_err,geometric_expectation,"
    "geometric_expectation_std_err,concentration_ratio,monopoly_price,"
    "monopoly_revenue,monopoly_attained,random_reserve_revenue,"
    "random_reserve_std_err,geo_over_e,welfare_floor_c_over_e\n";

std::string analyze_csv_row(const AnalyzeRow& r) {
  using report::format_number;
  std::string s = '"' + r.model + "\"," + std::to_string(r.n) + ',';
  s += format_number(r.mean.value) + ',' + format_number(r.mean.std_err) + ',';
  s += format_number(r.geo.value) + ',' + format_number(r.geo.std_err) + ',';
  s += format_number(r.ratio.value) + ',';
  s += format_number(r.monopoly.price) + ',' +
       format_number(r.monopoly.revenue) + ',' +
       (r.monopoly.attained ? "true" : "false") + ',';
  s += format_number(r.random_reserve.value) + ',' +
       format_number(r.random_reserve.std_err) + ',';
  s += format_number(r.geo_over_e) + ',' + format_number(r.welfare_floor) +
       '\n';
  return s;
}

ordered_json analyze_json_row(const AnalyzeRow& r) {
  ordered_json j;
  j["model"] = r.model;
  j["n"] = r.n;
  j["expectation"] = report::to_json(r.mean);
  j["geometric_expectation"] = report::to_json(r.geo);
  j["concentration_ratio"] = report::to_json(r.ratio);
  j["monopoly_price"] = report::json_number(r.monopoly.price);
  j["monopoly_revenue"] = report::json_number(r.monopoly.revenue);
  j["monopoly_attained"] = r.monopoly.attained;
  j["random_reserve_revenue"] = report::to_json(r.random_reserve);
  j["geo_over_e"] = report::json_number(r.geo_over_e);
  j["welfare_floor_c_over_e"] = report::json_number(r.welfare_floor);
  return j;
}

void print_analyze_table(std::ostream& os, const AnalyzeRow& r) {
  os << "model:                   " << r.model << '\n'
     << "buyers (n):              " << r.n << '\n'
     << "expectation E[Vmax]:     " << table_num(r.mean.value) << "  ["
     << method_name(r.mean.method) << "]\n"
     << "geometric exp G[Vmax]:   " << table_num(r.geo.value) << "  ["
     << method_name(r.geo.method) << "]\n"
     << "concentration c = G/E:   " << table_num(r.ratio.value) << '\n'
     << "monopoly price:          " << table_num(r.monopoly.price)
     << (r.monopoly.attained ? "" : "  (supremum, not attained)") << '\n'
     << "monopoly revenue:        " << table_num(r.monopoly.revenue) << '\n'
     << "random-reserve revenue:  " << table_num(r.random_reserve.value)
     << '\n'
     << "G/e revenue floor:       " << table_num(r.geo_over_e) << '\n'
     << "(c/e)*E welfare floor:   " << table_num(r.welfare_floor) << '\n';
}

int run_analyze(const ExperimentConfig& cfg) {
  const auto model = cfg.build_model();
  const auto row =
      compute_analyze_row(model, cfg.seed, cfg.samples, cfg.threads);
  Sink sink(cfg.out_path);
  switch (cfg.format) {
    case OutputFormat::Table:
      print_analyze_table(sink.out(), row);
      break;
    case OutputFormat::Csv:
      sink.out() << kAnalyzeCsvHeader << analyze_csv_row(row);
      break;
    case OutputFormat::Json: {
      ordered_json doc;
      doc["schema_version"] = report::kSchemaVersion;
      doc["command"] = "analyze";
      doc["seed"] = cfg.seed;
      doc["samples"] = cfg.samples;
      doc["result"] = analyze_json_row(row);
      sink.out() << doc.dump(2) << '\n';
      break;
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int run_simulate(const ExperimentConfig& cfg) {
  if (!cfg.mechanism)
    throw std::invalid_argument(
        "simulate needs a mechanism (config 'mechanism =' or --mechanism)");
  const auto model = cfg.build_model();
  MechanismSpec mech;
  mech.kind = *cfg.mechanism;
  if (cfg.price_source) mech.source = *cfg.price_source;

  EstimateOptions opts;
  opts.budget = cfg.samples;
  opts.seed = cfg.seed;
  opts.workers = cfg.threads;
  const auto est = estimate_revenue(mech, model, opts);

  Sink sink(cfg.out_path);
  switch (cfg.format) {
    case OutputFormat::Table: {
      auto& os = sink.out();
      os << "model:            " << model.describe() << '\n'
         << "samples:          " << est.samples << '\n'
         << "revenue mean:     " << table_num(est.mean) << '\n'
         << "std error:        " << table_num(est.std_err) << '\n'
         << "95% CI:           [" << table_num(est.ci_lo) << ", "
         << table_num(est.ci_hi) << "]\n"
         << "welfare mean:     " << table_num(est.welfare_mean) << '\n';
      if (est.blocks) {
        os << "original block:   " << table_num((*est.blocks)[0].mean) << '\n'
           << "replica block:    " << table_num((*est.blocks)[1].mean) << '\n';
      }
      break;
    }
    case OutputFormat::Csv: {
      using report::format_number;
      auto& os = sink.out();
      os << "model,mechanism,samples,mean,std_err,ci95_lo,ci95_hi,"
            "welfare_mean,original_block_mean,replica_block_mean\n";
      os << '"' << model.describe() << "\",";
      switch (mech.kind) {
        case MechanismKind::PostedPrice: os << "posted-price,"; break;
        case MechanismKind::SecondPriceReserve:
          os << "second-price-reserve,";
          break;
        case MechanismKind::SecondPriceReplicated:
          os << "second-price-replicated,";
          break;
      }
      os << est.samples << ',' << format_number(est.mean) << ','
         << format_number(est.std_err) << ',' << format_number(est.ci_lo)
         << ',' << format_number(est.ci_hi) << ','
         << format_number(est.welfare_mean) << ',';
      if (est.blocks)
        os << format_number((*est.blocks)[0].mean) << ','
           << format_number((*est.blocks)[1].mean) << '\n';
      else
        os << ",\n";
      break;
    }
    case OutputFormat::Json: {
      ordered_json doc;
      doc["schema_version"] = report::kSchemaVersion;
      doc["command"] = "simulate";
      doc["model"] = model.describe();
      doc["estimate"] = report::to_json(est);
      sink.out() << doc.dump(2) << '\n';
      break;
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int run_verify(const ExperimentConfig& cfg, bool zoo) {
  std::vector<BoundReport> reports;
  CheckOptions opts;
  opts.budget = cfg.samples;
  opts.seed = cfg.seed;
  opts.workers = cfg.threads;

  if (zoo) {
    for (const auto& entry : standard_zoo()) {
      auto rs = run_all_checks(entry.model, opts);
      reports.insert(reports.end(), rs.begin(), rs.end());
    }
  } else {
    reports = run_all_checks(cfg.build_model(), opts);
  }

  bool violated = false;
  for (const auto& r : reports) violated |= r.verdict == Verdict::Violated;

  Sink sink(cfg.out_path);
  switch (cfg.format) {
    case OutputFormat::Table: {
      auto& os = sink.out();
      for (const auto& r : reports) {
        os << (r.verdict == Verdict::Violated ? "[FAIL] " : "[ ok ] ")
           << bound_name(r.bound) << "  " << r.model << "\n"
           << "        verdict=" << verdict_name(r.verdict);
        if (r.verdict == Verdict::Vacuous || r.verdict == Verdict::Rejected)
          os << "  (" << r.detail << ")";
        else
          os << "  lhs=" << table_num(r.lhs.value)
             << " rhs=" << table_num(r.rhs.value)
             << " margin=" << table_num(r.margin)
             << " sigma=" << table_num(r.sigma);
        os << '\n';
      }
      os << (violated ? "RESULT: VIOLATED\n" : "RESULT: all bounds hold\n");
      break;
    }
    case OutputFormat::Csv:
      sink.out() << report::reports_to_csv(reports);
      break;
    case OutputFormat::Json: {
      auto doc = report::report_document(reports);
      doc["command"] = "verify";
      doc["seed"] = cfg.seed;
      doc["samples"] = cfg.samples;
      sink.out() << doc.dump(2) << '\n';
      break;
    }
  }
  return violated ? kExitRuntimeOrViolation : kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

std::string default_sweep_param(const FamilySpec& family) {
  if (family.name == "powerlaw") return "m";
  if (family.name == "exponential") return "rate";
  if (family.name == "lognormal") return "sigma";
  if (family.name == "uniform") return "hi";
  return "";
}

bool sweepable_param(const FamilySpec& family, const std::string& param) {
  const auto any_of = [&](std::initializer_list<const char*> names) {
    for (const char* n : names)
      if (param == n) return true;
    return false;
  };
  if (family.name == "powerlaw") return any_of({"m", "scale"});
  if (family.name == "exponential") return any_of({"rate", "lambda"});
  if (family.name == "uniform") return any_of({"lo", "hi"});
  if (family.name == "lognormal") return any_of({"mu", "sigma"});
  if (family.name == "pointmass") return any_of({"value", "v"});
  return false;
}

int run_sweep(const ExperimentConfig& cfg) {
  if (!cfg.range)
    throw std::invalid_argument(
        "sweep needs a range (config 'param-range =' or --param-range "
        "LO:HI:STEP)");
  const auto& family = cfg.primary_family();
  if (family.name == "empirical")
    throw std::invalid_argument(
        "sweep: empirical families have no sweepable numeric parameter");
  std::string param = cfg.sweep_param.empty() ? default_sweep_param(family)
                                              : cfg.sweep_param;
  if (param.empty())
    throw std::invalid_argument(
        "sweep: no parameter named; set 'sweep-param =' in the config");
  if (!sweepable_param(family, param))
    throw std::invalid_argument("sweep: '" + param +
                                "' is not a numeric parameter of " +
                                family.name);

  const auto row_for = [&](double value) {
    const auto model = cfg.build_model_with(family.with_param(param, value));
    return compute_analyze_row(model, cfg.seed, cfg.samples, cfg.threads);
  };
  const auto ratio_at = [&](double value) {
    const auto model = cfg.build_model_with(family.with_param(param, value));
    MaxDistConfig mcfg;
    mcfg.sample_budget = cfg.samples;
    mcfg.seed = derive_seed(cfg.seed, 1);
    const MaxValueDistribution fmax(model, mcfg);
    return concentration_ratio(fmax).value;
  };

  const auto& range = *cfg.range;
  std::vector<double> values;
  const auto steps = static_cast<std::size_t>(
      std::floor((range.hi - range.lo) / range.step + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i)
    values.push_back(
        std::min(range.lo + static_cast<double>(i) * range.step, range.hi));
  if (values.back() < range.hi - 1e-9 * std::max(1.0, std::abs(range.hi)))
    values.push_back(range.hi);

  std::vector<AnalyzeRow> rows;
  rows.reserve(values.size());
  for (double v : values) rows.push_back(row_for(v));

  // Smallest parameter whose concentration ratio reaches e/4, located by
  // bisection on the (monotone) closed-form ratio.
  std::optional<double> crossing;
  {
    double lo = range.lo, hi = range.hi;
    if (ratio_at(lo) >= kEOver4) {
      crossing = lo;
    } else if (ratio_at(hi) >= kEOver4) {
      for (int i = 0; i < 100 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ratio_at(mid) >= kEOver4 ? hi : lo) = mid;
      }
      crossing = hi;
    }
  }

  Sink sink(cfg.out_path);
  switch (cfg.format) {
    case OutputFormat::Table: {
      auto& os = sink.out();
      char line[160];
      std::snprintf(line, sizeof line, "%-10s %10s %10s %10s %10s %10s %10s %s\n",
                    param.c_str(), "E", "G", "c", "monop.rev", "rand.rsv",
                    "G/e", "c>=e/4");
      os << line;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::snprintf(line, sizeof line,
                      "%-10.4g %10s %10s %10s %10s %10s %10s %s\n", values[i],
                      table_num(r.mean.value).c_str(),
                      table_num(r.geo.value).c_str(),
                      table_num(r.ratio.value).c_str(),
                      table_num(r.monopoly.revenue).c_str(),
                      table_num(r.random_reserve.value).c_str(),
                      table_num(r.geo_over_e).c_str(),
                      r.ratio.value >= kEOver4 ? "yes" : "no");
        os << line;
      }
      if (crossing)
        os << "ratio crosses e/4 (~" << table_num(kEOver4) << ") at " << param
           << " = " << report::format_number(*crossing) << '\n';
      else
        os << "ratio never reaches e/4 inside the range\n";
      break;
    }
    case OutputFormat::Csv: {
      auto& os = sink.out();
      os << param
         << ",expectation,expectation_std_err,geometric_expectation,"
            "geometric_expectation_std_err,concentration_ratio,monopoly_price,"
            "monopoly_revenue,monopoly_attained,random_reserve_revenue,"
            "random_reserve_std_err,geo_over_e,welfare_floor_c_over_e,"
            "ratio_ge_e_over_4\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        using report::format_number;
        os << format_number(values[i]) << ',' << format_number(r.mean.value)
           << ',' << format_number(r.mean.std_err) << ','
           << format_number(r.geo.value) << ',' << format_number(r.geo.std_err)
           << ',' << format_number(r.ratio.value) << ','
           << format_number(r.monopoly.price) << ','
           << format_number(r.monopoly.revenue) << ','
           << (r.monopoly.attained ? "true" : "false") << ','
           << format_number(r.random_reserve.value) << ','
           << format_number(r.random_reserve.std_err) << ','
           << format_number(r.geo_over_e) << ','
           << format_number(r.welfare_floor) << ','
           << (r.ratio.value >= kEOver4 ? "true" : "false") << '\n';
      }
      if (crossing)
        os << "# e4_crossing," << param << ','
           << report::format_number(*crossing) << '\n';
      break;
    }
    case OutputFormat::Json: {
      ordered_json doc;
      doc["schema_version"] = report::kSchemaVersion;
      doc["command"] = "sweep";
      doc["param"] = param;
      doc["seed"] = cfg.seed;
      ordered_json jrows = ordered_json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        auto j = analyze_json_row(rows[i]);
        j["param_value"] = report::json_number(values[i]);
        j["ratio_ge_e_over_4"] = rows[i].ratio.value >= kEOver4;
        jrows.push_back(j);
      }
      doc["rows"] = jrows;
      if (crossing)
        doc["e4_crossing"] = report::json_number(*crossing);
      else
        doc["e4_crossing"] = nullptr;
      sink.out() << doc.dump(2) << '\n';
      break;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "georev: revenue guarantees for posted-price and second-price auctions "
      "in terms of the geometric expectation of the maximum valuation"};
  app.require_subcommand(0, 1);

  Overrides ov;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", ov.config_path, "experiment config file");
    cmd->add_option("--seed", ov.seed, "random seed (overrides config)");
    cmd->add_option("--samples", ov.samples, "Monte Carlo budget");
    cmd->add_option("--format", ov.format, "table | csv | json");
    cmd->add_option("--out", ov.out, "output path (default stdout)");
    cmd->add_option("--threads", ov.threads,
                    "worker threads (0 = hardware; results are identical for "
                    "any value)");
  };

  add_common(&app);
  auto* analyze = app.add_subcommand("analyze", "distribution functionals");
  add_common(analyze);
  auto* simulate = app.add_subcommand("simulate", "mechanism revenue estimate");
  add_common(simulate);
  simulate->add_option("--mechanism", ov.mechanism,
                       "posted-price | second-price-reserve | "
                       "second-price-replicated");
  simulate->add_option("--price", ov.price, "'fixed P' or 'random-from-max'");
  auto* verify = app.add_subcommand("verify", "check all revenue bounds");
  add_common(verify);
  verify->add_flag("--zoo", ov.zoo, "run the built-in 56-model zoo");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep table");
  add_common(sweep);
  sweep->add_option("--param-range", ov.param_range, "LO:HI:STEP");
  sweep->add_option("--param", ov.sweep_param, "family parameter to sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto cfg = merged_config(ov);
    std::optional<Command> command;
    if (analyze->parsed()) command = Command::Analyze;
    else if (simulate->parsed()) command = Command::Simulate;
    else if (verify->parsed()) command = Command::Verify;
    else if (sweep->parsed()) command = Command::Sweep;
    else command = cfg.command;
    if (!command) {
      std::cerr << "georev: no command given (subcommand or 'command =' in "
                   "the config)\n";
      return kExitUsage;
    }
    switch (*command) {
      case Command::Analyze: return run_analyze(cfg);
      case Command::Simulate: return run_simulate(cfg);
      case Command::Verify: return run_verify(cfg, ov.zoo);
      case Command::Sweep: return run_sweep(cfg);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "georev: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "georev: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "georev: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "georev: runtime error: " << e.what() << '\n';
    return kExitRuntimeOrViolation;
  }
}
