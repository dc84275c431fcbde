#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace singspec {

class UnknownExperiment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentSpec {
  std::string id;
  /// Overrides of the registry defaults; values are parsed on use.
  std::map<std::string, std::string> params;
  std::filesystem::path output_dir;
  std::uint64_t seed = 42;
};

struct AnchorRow {
  std::string assertion;
  std::string anchor;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
};

struct Curve {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ExperimentReport {
  std::string id;
  std::vector<AnchorRow> rows;
  std::vector<std::string> table_header;
  std::vector<std::vector<double>> table;
  std::vector<Curve> curves;
  /// Human-readable summary lines printed by the CLI.
  std::vector<std::string> summary;
  double seconds = 0.0;

  bool pass() const;
};

struct ExperimentInfo {
  std::string id;
  std::string anchor;
  std::map<std::string, std::string> defaults;
};

const std::vector<ExperimentInfo>& experiment_registry();

/// Seed from SINGSPEC_SEED, else 42.
std::uint64_t default_seed();

/// Merges a JSON object of parameters into spec.params without overwriting
/// keys already present (flags win over files).
void merge_config_file(ExperimentSpec& spec, const std::filesystem::path& file);

/// Runs the experiment; writes report.json, table.csv and *.dat files when
/// spec.output_dir is not empty. Throws UnknownExperiment for bad ids.
ExperimentReport run_experiment(const ExperimentSpec& spec);

void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace singspec
