// Copyright 2026 The qtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtherm/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace qtherm::cli {

namespace {

using K = KeyType;

std::vector<KeySpec> with_common(std::vector<KeySpec> keys) {
  std::vector<KeySpec> out{
      {"experiment", K::Text, "", false, "experiment name"},
      {"seed", K::Integer, "1", false, "master seed, 64-bit unsigned"},
      {"output_path", K::Text, "out", false, "output directory"},
  };
  out.insert(out.end(), keys.begin(), keys.end());
  return out;
}

const std::map<std::string, std::vector<KeySpec>>& registry() {
  static const std::map<std::string, std::vector<KeySpec>> r{
      {"lqts-sweep", with_common({
                         {"model", K::Text, "ising", false, "ising | xxz | decoupled"},
                         {"L", K::Integer, "8", false, "chain length"},
                         {"beta", K::Real, "6", false, "inverse temperature"},
                         {"param_min", K::Real, "0", false, "first coupling value (h or Delta)"},
                         {"param_max", K::Real, "2", false, "last coupling value"},
                         {"param_points", K::Integer, "41", false, "number of coupling values"},
                         {"n_A", K::IntegerList, "auto", true, "block sizes; auto = 1..L"},
                     })},
      {"lqts-scaling", with_common({
                           {"model", K::Text, "ising", false, "ising | xxz | decoupled"},
                           {"sizes", K::IntegerList, "auto", true, "chain lengths; auto = 6,8,10 (ising) or 6,8"},
                           {"beta_per_site", K::Real, "0.75", false, "beta = beta_per_site * L"},
                           {"mode", K::Text, "auto", true, "max | min | fixed; auto = max (ising), min (xxz), fixed"},
                           {"param_lo", K::Real, "auto", true, "grid start; auto = 0.5 (ising), -1.2 (xxz)"},
                           {"param_hi", K::Real, "auto", true, "grid end; auto = 1.7 (ising), -0.8 (xxz)"},
                           {"param_step", K::Real, "0.02", false, "grid step"},
                           {"target", K::Real, "auto", true, "coupling for mode = fixed; auto = 1 (ising), -1 (xxz)"},
                       })},
      {"discriminate", with_common({
                           {"T_hot", K::Real, "2", false, "hot temperature"},
                           {"T_cold", K::Real, "1", false, "cold temperature"},
                           {"omega", K::Real, "1", false, "probe splitting"},
                           {"gamma", K::Real, "1", false, "coupling rate"},
                           {"t_max", K::Real, "3", false, "last time, in units of 1/gamma"},
                           {"t_points", K::Integer, "301", false, "time grid size, starting at 0"},
                       })},
      {"fisher-compare", with_common({
                             {"N", K::IntegerList, "3", false, "numbers of measurements"},
                             {"tau_gamma", K::Real, "4", false, "interaction time in units of 1/gamma"},
                             {"omega", K::Real, "1", false, "probe splitting"},
                             {"gamma", K::Real, "1", false, "coupling rate"},
                             {"n_th_min", K::Real, "0.05", false, "lowest occupation of the temperature grid"},
                             {"n_th_max", K::Real, "2", false, "highest occupation of the temperature grid"},
                             {"temperatures", K::Integer, "40", false, "log-spaced occupations"},
                             {"samples", K::Integer, "200", false, "random inputs for the average"},
                             {"input_measure", K::Text, "haar", false, "haar (pure states) | ball (Bloch-ball volume)"},
                             {"angles", K::Integer, "181", false, "polar grid for optimal and worst inputs"},
                         })},
      {"optimal-probe", with_common({
                            {"M", K::IntegerList, "2,3,4,5", false, "numbers of levels"},
                            {"T", K::Real, "1", false, "temperature"},
                            {"e_max", K::Real, "auto", true, "energy budget; auto = 40 T"},
                        })},
      {"heisenberg-toy", with_common({
                             {"N", K::IntegerList, "2,4,8,16", false, "probe atom counts"},
                             {"modes", K::TextList, "product,noon", false, "product | noon"},
                             {"M", K::Integer, "10", false, "bath atoms"},
                             {"T", K::Real, "1", false, "bath temperature"},
                             {"epsilon", K::Real, "1", false, "bath level splitting"},
                             {"alpha", K::Real, "0.05", false, "dispersive coupling"},
                             {"tau", K::Real, "1", false, "interaction time"},
                             {"shots", K::Integer, "10000", false, "shots per trial"},
                             {"trials", K::Integer, "200", false, "trials for the RMSE"},
                             {"bath_sampling", K::Bool, "false", false, "draw m every shot"},
                         })},
  };
  return r;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) out.push_back(trim(cur));
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno) throw ConfigError(key, "'" + v + "' is not an integer");
  return x;
}

double to_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(x)) throw ConfigError(key, "'" + v + "' is not a finite number");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "'" + v + "' is not a boolean (true/false)");
}

void check_value(const KeySpec& spec, const std::string& v) {
  if (spec.allow_auto && v == "auto") return;
  // Parsed as uint64 in build().
  if (spec.name == "seed") return;
  switch (spec.type) {
    case K::Integer:
      to_integer(spec.name, v);
      break;
    case K::Real:
      to_real(spec.name, v);
      break;
    case K::Bool:
      to_bool(spec.name, v);
      break;
    case K::Text:
      if (v.find_first_of(",\n") != std::string::npos) throw ConfigError(spec.name, "text value may not contain ','");
      break;
    case K::IntegerList:
    case K::RealList:
    case K::TextList: {
      const auto items = split_list(v);
      if (items.empty()) throw ConfigError(spec.name, "empty list");
      for (const auto& item : items) {
        if (item.empty()) throw ConfigError(spec.name, "empty list item in '" + v + "'");
        if (spec.type == K::IntegerList) to_integer(spec.name, item);
        if (spec.type == K::RealList) to_real(spec.name, item);
      }
      break;
    }
  }
}

ExperimentConfig build(const std::string& experiment, const std::vector<std::pair<std::string, std::string>>& given) {
  const auto& specs = experiment_keys(experiment);
  std::map<std::string, std::string> values;
  for (const auto& [k, v] : given) {
    const auto it = std::find_if(specs.begin(), specs.end(), [&](const KeySpec& s) { return s.name == k; });
    if (it == specs.end()) throw ConfigError(k, "unknown key for experiment " + experiment);
    if (values.count(k)) throw ConfigError(k, "given twice");
    values[k] = v;
  }
  values["experiment"] = experiment;
  ExperimentConfig c;
  c.experiment = experiment;
  for (const auto& spec : specs) {
    const auto it = values.find(spec.name);
    const std::string v = it == values.end() ? spec.default_value : it->second;
    check_value(spec, v);
    c.entries.emplace_back(spec.name, v);
  }
  const std::string& seed = c.text("seed");
  if (seed.front() == '-') throw ConfigError("seed", "must be non-negative");
  char* end = nullptr;
  errno = 0;
  c.seed = std::strtoull(seed.c_str(), &end, 10);
  if (*end != '\0' || errno) throw ConfigError("seed", "'" + seed + "' is not a 64-bit unsigned integer");
  c.output_path = c.text("output_path");
  if (c.output_path.empty()) throw ConfigError("output_path", "must not be empty");
  return c;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"lqts-sweep",    "lqts-scaling",  "discriminate",
                                              "fisher-compare", "optimal-probe", "heisenberg-toy"};
  return names;
}

const std::vector<KeySpec>& experiment_keys(const std::string& experiment) {
  const auto it = registry().find(experiment);
  if (it == registry().end()) throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
  return it->second;
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  throw ConfigError(key, "not a key of experiment " + experiment);
}

bool ExperimentConfig::is_auto(const std::string& key) const { return raw(key) == "auto"; }
long long ExperimentConfig::integer(const std::string& key) const { return to_integer(key, raw(key)); }
double ExperimentConfig::real(const std::string& key) const { return to_real(key, raw(key)); }
bool ExperimentConfig::flag(const std::string& key) const { return to_bool(key, raw(key)); }
const std::string& ExperimentConfig::text(const std::string& key) const { return raw(key); }

std::vector<long long> ExperimentConfig::integers(const std::string& key) const {
  std::vector<long long> out;
  for (const auto& s : split_list(raw(key))) out.push_back(to_integer(key, s));
  return out;
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : split_list(raw(key))) out.push_back(to_real(key, s));
  return out;
}

std::vector<std::string> ExperimentConfig::texts(const std::string& key) const { return split_list(raw(key)); }

ExperimentConfig parse_config(const std::string& text, const std::string& fallback_experiment) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  std::vector<std::pair<std::string, std::string>> given;
  std::string experiment;
  for (const auto& [key, node] : tree) {
    if (!node.empty()) throw ConfigError(key, "sections are not supported, the config is flat");
    const std::string value = trim(node.data());
    if (key == "experiment")
      experiment = value;
    else
      given.emplace_back(key, value);
  }
  if (experiment.empty()) experiment = fallback_experiment;
  if (experiment.empty()) throw ConfigError("experiment", "missing");
  if (!fallback_experiment.empty() && experiment != fallback_experiment)
    throw ConfigError("experiment", "config names '" + experiment + "' but '" + fallback_experiment + "' was requested");
  return build(experiment, given);
}

ExperimentConfig load_config(const std::string& path, const std::string& fallback_experiment) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), fallback_experiment);
}

ExperimentConfig make_config(const std::string& experiment,
                             const std::vector<std::pair<std::string, std::string>>& values) {
  return build(experiment, values);
}

std::string format_config(const ExperimentConfig& config) {
  std::ostringstream os;
  for (const auto& [k, v] : config.entries) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace qtherm::cli
