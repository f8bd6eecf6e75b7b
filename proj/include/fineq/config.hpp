#pragma once

// Run configuration: INI-style sections of key = value pairs.  A [suite]
// section sets the sweep and output options; every other section names an
// experiment from the catalog with optional parameter overrides.

#include <map>
#include <string>
#include <vector>

namespace fineq {

struct ExperimentSpec {
  std::string name;
  std::map<std::string, std::string> params;

  double param(const std::string& key, double fallback) const;
  std::string param(const std::string& key, const std::string& fallback) const;
};

struct RunConfig {
  std::vector<int> ks = {8, 16, 32, 64, 128};
  std::vector<ExperimentSpec> experiments;  // empty = full catalog
  std::string output_dir = "out";
  unsigned long seed = 20260824;
  int l_cap = 64;
  bool emit_plots = true;

  void validate() const;  // throws config_error
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// the full catalog, in canonical order
const std::vector<std::string>& experiment_catalog();

}  // namespace fineq
