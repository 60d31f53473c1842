#include "grushin/lab.hpp"

#include <json.hpp>

#include <Eigen/Core>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace grushin::lab {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

const char* comparison_name(Comparison c) {
  switch (c) {
    case Comparison::at_most: return "at_most";
    case Comparison::at_least: return "at_least";
    case Comparison::relative: return "relative";
    default: return "absolute";
  }
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

nlohmann::json value_json(const ConfigValue& v) {
  return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

}  // namespace

bool ExperimentReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string results_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "experiment,group,check,parameters,measured,target,comparison,tolerance,tag,pass\n";
  for (const auto& r : report.rows) {
    out << csv_field(r.experiment) << ',' << csv_field(r.group) << ',' << csv_field(r.check) << ','
        << csv_field(r.parameters) << ',' << format_number(r.measured) << ',' << format_number(r.target) << ','
        << comparison_name(r.comparison) << ',' << format_number(r.tolerance) << ',' << csv_field(r.tag) << ','
        << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string table_csv(const DataTable& table) {
  std::ostringstream out;
  for (size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << csv_field(table.header[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
  return out.str();
}

std::string summary_json(const ExperimentReport& report, const Config& config) {
  nlohmann::ordered_json j;
  j["experiment"] = report.id;
  j["all_pass"] = report.all_pass();
  int passed = 0;
  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  for (const auto& r : report.rows) {
    passed += r.pass;
    auto& g = groups[r.group];
    if (g.is_null()) g = {{"rows", 0}, {"passed", 0}};
    g["rows"] = g["rows"].get<int>() + 1;
    g["passed"] = g["passed"].get<int>() + (r.pass ? 1 : 0);
  }
  j["rows"] = report.rows.size();
  j["passed"] = passed;
  j["groups"] = groups;
  j["warnings"] = report.warnings;
  nlohmann::ordered_json tables = nlohmann::ordered_json::array();
  for (const auto& t : report.tables) tables.push_back(t.name + ".csv");
  j["tables"] = tables;
  j["environment"] = {{"compiler", __VERSION__},
                      {"cxx_standard", __cplusplus},
                      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)},
                      {"scalar", "double"}};
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.values()) echo[k] = value_json(v);
  j["config"] = echo;
  return j.dump(2) + "\n";
}

void write_outputs(const ExperimentReport& report, const Config& config, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_file(fs::path(dir) / "results.csv", results_csv(report));
  write_file(fs::path(dir) / "summary.json", summary_json(report, config));
  for (const auto& t : report.tables) write_file(fs::path(dir) / (t.name + ".csv"), table_csv(t));
}

}  // namespace grushin::lab
