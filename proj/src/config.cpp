#include "fineq/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fineq/errors.hpp"

namespace fineq {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  auto b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error("cannot parse boolean '" + v + "' for key " + key);
}

}  // namespace

double ExperimentSpec::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw config_error("cannot parse number '" + it->second + "' for key " + key);
  }
}

std::string ExperimentSpec::param(const std::string& key,
                                  const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

const std::vector<std::string>& experiment_catalog() {
  static const std::vector<std::string> names = {
      "dim_check",          "p1_norm",        "p2_bracket",
      "product_expansion",  "trace_check",    "egorov",
      "composition_defect", "homotopy_defect", "loop_phase",
      "separation",         "schatten_sandwich", "projective_separation"};
  return names;
}

void RunConfig::validate() const {
  if (ks.empty()) throw config_error("ks must be non-empty");
  for (size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1 || ks[i] > 512) throw config_error("each k must lie in [1, 512]");
    if (i > 0 && ks[i] <= ks[i - 1])
      throw config_error("ks must be strictly increasing");
  }
  if (l_cap < 4 || l_cap > 512) throw config_error("l_cap must lie in [4, 512]");
  const auto& catalog = experiment_catalog();
  for (const auto& e : experiments)
    if (std::find(catalog.begin(), catalog.end(), e.name) == catalog.end())
      throw config_error("unknown experiment '" + e.name + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line, section = "suite";
  ExperimentSpec* current = nullptr;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("malformed section at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "suite") {
        cfg.experiments.push_back(ExperimentSpec{section, {}});
        current = &cfg.experiments.back();
      } else {
        current = nullptr;
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("empty key at line " + std::to_string(lineno));
    if (current) {
      current->params[key] = value;
      continue;
    }
    try {
      if (key == "ks") {
        cfg.ks.clear();
        for (const auto& part : split(value, ',')) cfg.ks.push_back(std::stoi(part));
      } else if (key == "output_dir") {
        cfg.output_dir = value;
      } else if (key == "seed") {
        cfg.seed = std::stoul(value);
      } else if (key == "l_cap") {
        cfg.l_cap = std::stoi(value);
      } else if (key == "emit_plots") {
        cfg.emit_plots = parse_bool(value, key);
      } else {
        throw config_error("unknown suite key '" + key + "'");
      }
    } catch (const config_error&) {
      throw;
    } catch (const std::exception&) {
      throw config_error("cannot parse value '" + value + "' for key " + key);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace fineq
