#pragma once

#include "grushin/grid.hpp"
#include "grushin/quadrature.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace grushin::lab {

// ---------------------------------------------------------------------------
// Config: flat TOML subset. Keys are dot paths ("grid.points").

using ConfigValue = std::variant<bool, double, std::string, std::vector<double>, std::vector<std::string>>;

class Config {
 public:
  void set(const std::string& key, ConfigValue value) { values_[key] = std::move(value); }
  /// "a.b=value" with a TOML value; bare words are taken as strings.
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, ConfigValue>& values() const { return values_; }

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  /// Number or the string "inf".
  double exponent(const std::string& key, double fallback) const;

  /// Throws ConfigurationError naming the first key outside `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

 private:
  std::map<std::string, ConfigValue> values_;
};

ConfigValue parse_value(const std::string& text, const std::string& key);
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

// ---------------------------------------------------------------------------
// Reports.

enum class Comparison { at_most, at_least, relative, absolute };

struct ReportRow {
  std::string experiment;
  std::string group;
  std::string check;
  std::string parameters;
  double measured = 0.0;
  double target = 0.0;
  Comparison comparison = Comparison::at_most;
  double tolerance = 0.0;
  std::string tag;
  bool pass = false;
};

struct DataTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentReport {
  std::string id;
  std::vector<ReportRow> rows;
  std::vector<DataTable> tables;
  std::vector<std::string> warnings;
  bool all_pass() const;
};

struct ExperimentInfo {
  std::string id;
  std::string description;
  std::string claims;
};

const std::vector<ExperimentInfo>& experiment_table();
/// "id → claims" lines plus descriptions.
std::string list_text();

/// Dispatches on config key "experiment".
ExperimentReport run_experiment(const Config& config);

/// Shortest round-trip formatting, locale independent.
std::string format_number(double v);
std::string results_csv(const ExperimentReport& report);
std::string table_csv(const DataTable& table);
std::string summary_json(const ExperimentReport& report, const Config& config);
/// Writes results.csv, summary.json and one CSV per data table into dir.
void write_outputs(const ExperimentReport& report, const Config& config, const std::string& dir);

}  // namespace grushin::lab
