#include "grushin/lab.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace grushin::lab {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// drop a trailing comment that is not inside a string
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool parse_double(const std::string& s, double& out) {
  std::string t;
  for (char c : s)
    if (c != '_') t.push_back(c);
  if (t == "inf" || t == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (t.empty()) return false;
  const char* b = t.data();
  const char* e = t.data() + t.size();
  if (*b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

std::string unquote(const std::string& s, const std::string& key) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') throw ConfigurationError(key + ": malformed string " + s);
  std::string out;
  for (size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\' && i + 2 < s.size()) {
      const char c = s[++i];
      out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::vector<std::string> split_array(const std::string& body) {
  std::vector<std::string> items;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c == '"' && (i == 0 || body[i - 1] != '\\')) quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty()) items.push_back(trim(cur));
  return items;
}

const char* type_name(const ConfigValue& v) {
  switch (v.index()) {
    case 0: return "boolean";
    case 1: return "number";
    case 2: return "string";
    case 3: return "number array";
    default: return "string array";
  }
}

}  // namespace

ConfigValue parse_value(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigurationError(key + ": missing value");
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '"') return unquote(s, key);
  if (s.front() == '[') {
    if (s.back() != ']') throw ConfigurationError(key + ": unterminated array");
    const auto items = split_array(s.substr(1, s.size() - 2));
    if (items.empty()) return std::vector<double>{};
    if (items.front().front() == '"') {
      std::vector<std::string> out;
      for (const auto& it : items) {
        if (it.empty() || it.front() != '"') throw ConfigurationError(key + ": mixed array");
        out.push_back(unquote(it, key));
      }
      return out;
    }
    std::vector<double> out;
    for (const auto& it : items) {
      double d;
      if (!parse_double(it, d)) throw ConfigurationError(key + ": bad array entry " + it);
      out.push_back(d);
    }
    return out;
  }
  double d;
  if (parse_double(s, d)) return d;
  throw ConfigurationError(key + ": cannot parse value " + s);
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (s.front() == '[' && s.find('=') == std::string::npos) {
      if (s.back() != ']') throw ConfigurationError(where + ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigurationError(where + ": empty section name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigurationError(where + ": expected key = value");
    const std::string name = trim(s.substr(0, eq));
    if (name.empty()) throw ConfigurationError(where + ": empty key");
    const std::string key = section.empty() ? name : section + "." + name;
    std::string value = trim(s.substr(eq + 1));
    // arrays may span lines
    if (!value.empty() && value.front() == '[') {
      int depth = 0;
      auto count = [&](const std::string& v) {
        for (char c : v) depth += c == '[' ? 1 : c == ']' ? -1 : 0;
      };
      count(value);
      while (depth > 0 && std::getline(in, line)) {
        ++lineno;
        const std::string more = trim(strip_comment(line));
        count(more);
        value += " " + more;
      }
      if (depth != 0) throw ConfigurationError(key + ": unterminated array");
    }
    if (cfg.has(key)) throw ConfigurationError(key + ": duplicate key");
    cfg.set(key, parse_value(value, key));
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigurationError("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigurationError("override must look like key=value: " + assignment);
  const std::string key = trim(assignment.substr(0, eq));
  const std::string raw = trim(assignment.substr(eq + 1));
  if (key.empty()) throw ConfigurationError("override with empty key");
  try {
    set(key, parse_value(raw, key));
  } catch (const ConfigurationError&) {
    set(key, raw);  // bare word
  }
}

double Config::number(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto p = std::get_if<double>(&it->second)) return *p;
  throw ConfigurationError(key + ": expected a number, got " + type_name(it->second));
}

int Config::integer(const std::string& key, int fallback) const {
  const double d = number(key, fallback);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigurationError(key + ": expected an integer");
  return static_cast<int>(d);
}

bool Config::boolean(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto p = std::get_if<bool>(&it->second)) return *p;
  throw ConfigurationError(key + ": expected a boolean, got " + type_name(it->second));
}

std::string Config::string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto p = std::get_if<std::string>(&it->second)) return *p;
  throw ConfigurationError(key + ": expected a string, got " + type_name(it->second));
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto p = std::get_if<std::vector<double>>(&it->second)) return *p;
  if (auto p = std::get_if<double>(&it->second)) return {*p};
  throw ConfigurationError(key + ": expected a number array, got " + type_name(it->second));
}

double Config::exponent(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto p = std::get_if<std::string>(&it->second)) {
    if (*p == "inf" || *p == "infinity") return std::numeric_limits<double>::infinity();
    throw ConfigurationError(key + ": expected a number or \"inf\"");
  }
  return number(key, fallback);
}

void Config::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [k, v] : values_)
    if (!allowed.count(k)) throw ConfigurationError(k + ": unknown key for this experiment");
}

}  // namespace grushin::lab
