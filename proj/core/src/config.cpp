#include "porosplit/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace porosplit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("invalid boolean '" + v + "' for " + key);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::pair<std::string, std::vector<std::string>> parse_sweep(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("sweep needs 'key: v1, v2'");
  std::string key = trim(text.substr(0, colon));
  std::vector<std::string> values;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) values.push_back(item);
  }
  if (key.empty() || values.empty()) throw std::invalid_argument("empty sweep '" + text + "'");
  return {key, values};
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  bool have_case = false;
  for (const auto& [key, value] : parse_key_values(in)) {
    if (key == "case") {
      cfg.kind = parse_case(value);
      have_case = true;
    } else if (key == "name") {
      cfg.name = value;
    } else if (key == "scheme") {
      cfg.schemes.push_back(SplitConfig::parse(value));
    } else if (key == "sweep") {
      std::tie(cfg.sweep_key, cfg.sweep_values) = parse_sweep(value);
    } else if (key == "inner_rtol") {
      cfg.inner_rtol = std::stod(value);
    } else if (key == "ilu_level") {
      cfg.ilu_level = std::stoi(value);
    } else if (key == "timing") {
      cfg.timing = parse_bool(key, value);
    } else {
      cfg.overrides[key] = value;
    }
  }
  if (!have_case) throw std::invalid_argument("config: missing 'case'");
  if (cfg.schemes.empty()) cfg.schemes.push_back(SplitConfig::parse("altmin"));
  // Reject unknown keys and bad values before any work is done.
  ModelParameters p = default_parameters(cfg.kind);
  BenchmarkCase c = default_case(cfg.kind);
  apply_overrides(p, c, cfg.overrides);
  if (!cfg.sweep_key.empty())
    for (const auto& v : cfg.sweep_values) {
      ParameterMap m = cfg.overrides;
      m[cfg.sweep_key] = v;
      ModelParameters p2 = default_parameters(cfg.kind);
      BenchmarkCase c2 = default_case(cfg.kind);
      apply_overrides(p2, c2, m);
    }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path.string() + "'");
  return parse_run_config(in);
}

}  // namespace porosplit
