#pragma once

// JSON scenario configs: a gallery metric, the checks to run on it and the
// sampling / tolerance settings, plus the report they produce.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qdecay {

enum class CheckKind {
  decay,
  lower_decay,
  growth,
  comparison,
  gauss_bonnet,
  prop3_estimates,
  family_condition,
  acceptance,  // one criterion of the acceptance suite (metric "acceptance")
};

std::string to_string(CheckKind kind);
CheckKind parse_check(const std::string& name);

struct RadiusRange {
  double from = 10.0;
  double to = 1000.0;
  int count = 13;
  std::vector<double> explicit_values;  // overrides the geometric grid when set
  std::vector<double> values() const;
};

struct ScenarioConfig {
  std::string name;
  std::string metric;
  nlohmann::json params = nlohmann::json::object();
  std::vector<CheckKind> checks;

  RadiusRange radii;                       // decay sampling radii
  RadiusRange growth_radii{1.0, 1000.0, 31, {}};
  int points_per_radius = 4;
  int planes_per_point = 3;
  std::string volume_method = "quadrature";
  std::size_t mc_budget = 200'000;
  std::optional<std::uint64_t> seed;
  double gauss_bonnet_T = 1e6;
  double family_from = 10.0;
  double family_to = 1e4;

  nlohmann::json tolerances = nlohmann::json::object();
  std::string output_dir = "out";

  // Throws ConfigError on malformed input.
  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig load(const std::string& path);
  nlohmann::json to_json() const;
  void validate() const;
};

struct CsvTable {
  std::string file;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  nlohmann::json body;           // scenario echo, per-check results, provenance
  std::vector<CsvTable> tables;
  double wall_seconds = 0.0;     // written to timing.json only
  bool pass() const;
};

// Unknown metric names raise ConfigError; checks that cannot run on the
// metric raise CapabilityError before anything is computed. Failures inside
// a check are recorded in that check's entry.
Report run_scenario(const ScenarioConfig& config);

// report.json, one CSV per table and timing.json under dir. Throws IoError.
void emit_report(const Report& report, const std::string& dir);

std::string csv_text(const CsvTable& table);

}  // namespace qdecay
