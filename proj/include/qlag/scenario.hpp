#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qlag/core.hpp"

namespace qlag {

// Raised for config documents that do not match the published schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration. Keys of the JSON document match the field names;
/// unknown keys are rejected.
struct ScenarioConfig {
  std::string scenario;  // euclidean | sphere | hyperbolic | so3 | pair-groupoid-state | custom
  int n = 2;
  double m = 1.0;
  double c_K = 1.0;
  double hbar = 1.0;
  double step = 1e-3;
  double t_max = 10.0;
  std::uint64_t seed = 0;
  int samples = 0;  // 0: scenario default
  std::string output_dir = "out";
  std::vector<double> inertia;      // so3 principal moments
  std::vector<double> initial_xi;   // so3 / custom
  std::vector<std::vector<std::vector<double>>> structure_constants;  // custom, [c][a][b]
  std::vector<std::vector<double>> eta;                               // custom fiber metric
  std::map<std::string, double> tolerances;  // overrides of scenario thresholds

  static ScenarioConfig from_json(const nlohmann::json& doc);
  double tolerance(const std::string& key, double fallback) const;
};

struct RunResult {
  int exit_code = 0;
  nlohmann::json report;
  std::vector<std::string> files;  // written, relative to output_dir
};

/// Runs one scenario and writes report.json, CSV and SVG artifacts into
/// config.output_dir. report.json is written even when an assertion fails.
RunResult run_scenario(const ScenarioConfig& config);

// Deterministic shortest round-trip decimal form ("%.17g").
std::string format_double(double v);

/// Minimal RFC 4180 writer; fields containing separators or quotes are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
};

std::string csv_escape(const std::string& field);
std::string format_vector(const Vec& v);

}  // namespace qlag
