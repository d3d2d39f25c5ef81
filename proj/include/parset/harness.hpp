#pragma once

#include "parset/bounds.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parset::harness {

/// Configuration problems; the CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string tool_version();

/// Knobs shared by every suite. JSON keys match the field names.
struct SuiteConfig {
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::uint64_t samples = 200'000;  // per Monte Carlo estimate
  int instances = 20;               // random instances per sampled check
  std::uint64_t calibration_samples = 2'000'000;
  std::uint64_t entropy_samples = 200'000;
  int convergence_trials = 20;
  bool convergence = true;
};

SuiteConfig parse_suite_config(const std::string& text, const std::string& source);
nlohmann::ordered_json to_json(const SuiteConfig& cfg);

struct CheckRow {
  std::string suite;
  BoundReport report;
};

struct RunManifest {
  std::string tool_version;
  std::string suite;
  nlohmann::ordered_json config;
  double wall_seconds = 0.0;
  std::vector<CheckRow> checks;

  bool all_pass() const;
};

const std::vector<std::string>& suite_names();

/// Runs one suite (or `all`). Throws ConfigError for an unknown name.
RunManifest run_suite(const std::string& name, const SuiteConfig& cfg);

/// A single check described in a JSON file:
///   {"name": ..., "module": ..., "parameters": {...}, "seed": ..., "output_path": ...}
/// Modules: core-geometry, exact2d, mc-measure, bounds, robust-risk, entropy.
struct ExperimentConfig {
  std::string name;
  std::string module;
  nlohmann::json parameters;
  std::optional<std::uint64_t> seed;
  std::string output_path;
};

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source);
RunManifest run_experiment(const ExperimentConfig& cfg, unsigned workers);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
std::string reports_csv(const std::vector<CheckRow>& rows);
nlohmann::ordered_json reports_json(const std::vector<CheckRow>& rows);
/// Everything above plus wall time and version.
nlohmann::ordered_json manifest_json(const RunManifest& manifest);

std::string read_file(const std::string& path);

}  // namespace parset::harness
