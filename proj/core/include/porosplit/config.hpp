#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "porosplit/model.hpp"
#include "porosplit/splitters.hpp"

namespace porosplit {

/// One benchmark configuration: a case, the schemes to compare, fixed
/// parameter overrides, and an optional one-parameter sweep.
///
/// File format, one `key = value` per line, `#` starts a comment:
///   case = swelling
///   scheme = altmin            (repeatable; e.g. l2s(-0.5,0,1)+aa5)
///   sweep = kappa_s: 1e2, 1e3  (any override key)
///   inner_rtol = 1e-8
///   ilu_level = 3
///   timing = false
///   <override key> = <value>   (see apply_overrides)
struct RunConfig {
  std::string name = "run";
  CaseKind kind = CaseKind::swelling;
  std::vector<SplitConfig> schemes;
  ParameterMap overrides;
  std::string sweep_key;
  std::vector<std::string> sweep_values;
  double inner_rtol = 1e-8;
  int ilu_level = 3;
  bool timing = false;
};

/// Ordered `key = value` pairs; throws on a line without '='.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in);

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

/// "kappa_s: 1e2, 1e3" -> ("kappa_s", {"1e2", "1e3"}).
std::pair<std::string, std::vector<std::string>> parse_sweep(const std::string& text);

}  // namespace porosplit
