#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "georev/joint.hpp"
#include "georev/mechanisms.hpp"

namespace georev {

/// Config parse failure with file/line/field context, e.g.
/// "model.cfg:7: rho: expected a number in [0, 1]".
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& origin, std::size_t line,
              const std::string& field, const std::string& message);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

/// A marginal family as written in a config ("powerlaw m=2 scale=1"). Kept in
/// symbolic form so parameter sweeps can rebuild it with one key overridden.
struct FamilySpec {
  std::string name;
  std::map<std::string, double> params;
  std::string file;  // empirical only

  MarginalDistribution build() const;
  FamilySpec with_param(const std::string& key, double value) const;
  bool has_param(const std::string& key) const;
};

FamilySpec parse_family_spec(const std::string& text);

enum class Command { Analyze, Simulate, Verify, Sweep };
enum class OutputFormat { Table, Csv, Json };

struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
};

SweepRange parse_sweep_range(const std::string& text);  // "LO:HI:STEP"

/// Parsed experiment file: the model spec plus run defaults. Command-line
/// flags override individual fields after parsing.
struct ExperimentConfig {
  enum class Structure { Independent, Mixture };

  Structure structure = Structure::Independent;
  std::vector<FamilySpec> marginals;
  std::optional<FamilySpec> base;  // mixture
  double rho = 0.0;
  std::size_t n = 0;  // 0 = inferred (marginal count, or 1)
  bool replicate = false;

  std::optional<Command> command;
  std::uint64_t seed = 42;
  std::size_t samples = 1'000'000;
  OutputFormat format = OutputFormat::Table;
  std::string out_path;  // empty = stdout
  unsigned threads = 0;  // 0 = hardware concurrency

  std::optional<MechanismKind> mechanism;
  std::optional<PriceSource> price_source;

  std::string sweep_param;
  std::optional<SweepRange> range;

  bool has_model() const { return !marginals.empty() || base.has_value(); }

  /// Builds the joint model this config describes; throws ConfigError when
  /// the spec is incomplete or inconsistent.
  JointValuationModel build_model() const;

  /// The family a sweep varies: the mixture base, or the single marginal.
  const FamilySpec& primary_family() const;

  /// Same structure with the primary family replaced (sweep support).
  JointValuationModel build_model_with(const FamilySpec& family) const;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin);

Command parse_command(const std::string& name);
OutputFormat parse_format(const std::string& name);
const char* command_name(Command c);
const char* format_name(OutputFormat f);

}  // namespace georev
