#include "georev/model_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace georev {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && !s.empty();
}

[[noreturn]] void fail(const std::string& origin, std::size_t line,
                       const std::string& field, const std::string& msg) {
  throw ConfigError(origin, line, field, msg);
}

}  // namespace

ConfigError::ConfigError(const std::string& origin, std::size_t line,
                         const std::string& field, const std::string& message)
    : std::runtime_error(origin + ":" + std::to_string(line) + ": " + field +
                         ": " + message),
      line_(line),
      field_(field) {}

FamilySpec parse_family_spec(const std::string& text) {
  const auto tokens = split_ws(text);
  if (tokens.empty())
    throw std::invalid_argument("family spec is empty");
  FamilySpec spec;
  spec.name = lower(tokens.front());
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key=value, got '" + tokens[i] + "'");
    const std::string key = lower(tokens[i].substr(0, eq));
    const std::string val = tokens[i].substr(eq + 1);
    if (key == "file") {
      spec.file = val;
      continue;
    }
    double num = 0.0;
    if (!parse_double(val, num))
      throw std::invalid_argument("parameter '" + key + "' is not a number: '" +
                                  val + "'");
    spec.params[key] = num;
  }
  return spec;
}

bool FamilySpec::has_param(const std::string& key) const {
  return params.count(key) != 0;
}

FamilySpec FamilySpec::with_param(const std::string& key, double value) const {
  FamilySpec copy = *this;
  copy.params[lower(key)] = value;
  return copy;
}

MarginalDistribution FamilySpec::build() const {
  auto get = [&](const char* key, std::optional<double> fallback =
                                      std::nullopt) -> double {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw std::invalid_argument(name + ": missing parameter '" +
                                std::string(key) + "'");
  };
  if (name == "powerlaw")
    return MarginalDistribution(PowerLaw{get("m"), get("scale", 1.0)});
  if (name == "exponential")
    return MarginalDistribution(Exponential{get("rate", get("lambda", 1.0))});
  if (name == "uniform")
    return MarginalDistribution(Uniform{get("lo", 0.0), get("hi", 1.0)});
  if (name == "pointmass")
    return MarginalDistribution(PointMass{get("value", get("v", 1.0))});
  if (name == "lognormal")
    return MarginalDistribution(LogNormal{get("mu", 0.0), get("sigma", 1.0)});
  if (name == "empirical") {
    if (file.empty())
      throw std::invalid_argument("empirical: missing file=PATH");
    return MarginalDistribution(load_empirical_file(file));
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

SweepRange parse_sweep_range(const std::string& text) {
  SweepRange r;
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos ||
      !parse_double(text.substr(0, c1), r.lo) ||
      !parse_double(text.substr(c1 + 1, c2 - c1 - 1), r.hi) ||
      !parse_double(text.substr(c2 + 1), r.step))
    throw std::invalid_argument("expected LO:HI:STEP, got '" + text + "'");
  if (!(r.step > 0.0) || !(r.hi >= r.lo))
    throw std::invalid_argument("sweep range needs hi >= lo and step > 0");
  return r;
}

Command parse_command(const std::string& name) {
  const auto n = lower(name);
  if (n == "analyze") return Command::Analyze;
  if (n == "simulate") return Command::Simulate;
  if (n == "verify") return Command::Verify;
  if (n == "sweep") return Command::Sweep;
  throw std::invalid_argument("unknown command '" + name + "'");
}

OutputFormat parse_format(const std::string& name) {
  const auto n = lower(name);
  if (n == "table") return OutputFormat::Table;
  if (n == "csv") return OutputFormat::Csv;
  if (n == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + name + "'");
}

const char* command_name(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Simulate: return "simulate";
    case Command::Verify: return "verify";
    case Command::Sweep: return "sweep";
  }
  return "unknown";
}

const char* format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Table: return "table";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
  }
  return "unknown";
}

JointValuationModel ExperimentConfig::build_model() const {
  if (structure == Structure::Mixture) {
    if (!base)
      throw std::invalid_argument("mixture structure needs a 'base =' family");
    auto model = JointValuationModel::common_value_mixture(
        rho, base->build(), n == 0 ? 1 : n);
    return replicate ? JointValuationModel::replicated(model) : model;
  }
  if (marginals.empty())
    throw std::invalid_argument("no 'marginal =' line in model spec");
  std::vector<MarginalDistribution> ms;
  if (marginals.size() == 1 && n > 1) {
    ms.assign(n, marginals.front().build());
  } else {
    if (n != 0 && n != marginals.size())
      throw std::invalid_argument(
          "n does not match the number of 'marginal =' lines");
    ms.reserve(marginals.size());
    for (const auto& spec : marginals) ms.push_back(spec.build());
  }
  auto model = JointValuationModel::independent(std::move(ms));
  return replicate ? JointValuationModel::replicated(model) : model;
}

const FamilySpec& ExperimentConfig::primary_family() const {
  if (structure == Structure::Mixture) {
    if (!base)
      throw std::invalid_argument("mixture structure needs a 'base =' family");
    return *base;
  }
  if (marginals.size() != 1)
    throw std::invalid_argument(
        "parameter sweeps need exactly one marginal family");
  return marginals.front();
}

JointValuationModel ExperimentConfig::build_model_with(
    const FamilySpec& family) const {
  ExperimentConfig copy = *this;
  if (structure == Structure::Mixture)
    copy.base = family;
  else
    copy.marginals = {family};
  return copy.build_model();
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin, line_no, line, "expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) fail(origin, line_no, key, "empty value");

    try {
      if (key == "structure") {
        const auto v = lower(value);
        if (v == "independent")
          cfg.structure = ExperimentConfig::Structure::Independent;
        else if (v == "mixture" || v == "common-value-mixture")
          cfg.structure = ExperimentConfig::Structure::Mixture;
        else
          fail(origin, line_no, key,
               "expected 'independent' or 'mixture', got '" + value + "'");
      } else if (key == "marginal") {
        cfg.marginals.push_back(parse_family_spec(value));
      } else if (key == "base") {
        cfg.base = parse_family_spec(value);
      } else if (key == "rho") {
        double v;
        if (!parse_double(value, v) || v < 0.0 || v > 1.0)
          fail(origin, line_no, key, "expected a number in [0, 1]");
        cfg.rho = v;
      } else if (key == "n") {
        double v;
        if (!parse_double(value, v) || v < 1.0 || v != std::floor(v))
          fail(origin, line_no, key, "expected a positive integer");
        cfg.n = static_cast<std::size_t>(v);
      } else if (key == "replicate") {
        const auto v = lower(value);
        if (v == "true" || v == "yes" || v == "1")
          cfg.replicate = true;
        else if (v == "false" || v == "no" || v == "0")
          cfg.replicate = false;
        else
          fail(origin, line_no, key, "expected true or false");
      } else if (key == "command") {
        cfg.command = parse_command(value);
      } else if (key == "seed") {
        try {
          cfg.seed = std::stoull(value);
        } catch (const std::exception&) {
          fail(origin, line_no, key, "expected an unsigned integer");
        }
      } else if (key == "samples") {
        double v;
        if (!parse_double(value, v) || v < 1.0 || v != std::floor(v))
          fail(origin, line_no, key, "expected a positive integer");
        cfg.samples = static_cast<std::size_t>(v);
      } else if (key == "format") {
        cfg.format = parse_format(value);
      } else if (key == "out") {
        cfg.out_path = value;
      } else if (key == "threads") {
        double v;
        if (!parse_double(value, v) || v < 0.0 || v != std::floor(v))
          fail(origin, line_no, key, "expected a nonnegative integer");
        cfg.threads = static_cast<unsigned>(v);
      } else if (key == "mechanism") {
        const auto v = lower(value);
        if (v == "posted-price")
          cfg.mechanism = MechanismKind::PostedPrice;
        else if (v == "second-price-reserve")
          cfg.mechanism = MechanismKind::SecondPriceReserve;
        else if (v == "second-price-replicated")
          cfg.mechanism = MechanismKind::SecondPriceReplicated;
        else
          fail(origin, line_no, key,
               "expected posted-price | second-price-reserve | "
               "second-price-replicated");
      } else if (key == "price" || key == "reserve") {
        const auto tokens = split_ws(lower(value));
        if (tokens.size() == 2 && tokens[0] == "fixed") {
          double p;
          if (!parse_double(tokens[1], p))
            fail(origin, line_no, key, "expected 'fixed P' with numeric P");
          cfg.price_source = FixedPrice{p};
        } else if (tokens.size() == 1 && tokens[0] == "random-from-max") {
          cfg.price_source = RandomFromMax{};
        } else {
          fail(origin, line_no, key, "expected 'fixed P' or 'random-from-max'");
        }
      } else if (key == "sweep-param" || key == "sweep_param") {
        cfg.sweep_param = lower(value);
      } else if (key == "param-range" || key == "param_range") {
        cfg.range = parse_sweep_range(value);
      } else {
        fail(origin, line_no, key, "unknown key");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(origin, line_no, key, e.what());
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config file not readable: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace georev
