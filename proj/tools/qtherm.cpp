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

// qtherm <experiment> --config <path> [--threads K] [--output DIR]
// qtherm validate --config <path>

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "qtherm/cli/experiments.hpp"

namespace {

using namespace qtherm::cli;

int default_threads() {
  if (const char* env = std::getenv("QTHERM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*env != '\0' && *end == '\0' && v >= 1) return static_cast<int>(v);
    std::cerr << "warning: ignoring QTHERM_THREADS='" << env << "'\n";
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int run(const std::string& experiment, const std::string& config_path, int threads, const std::string& output) {
  const ExperimentConfig config =
      config_path.empty() ? make_config(experiment) : load_config(config_path, experiment);
  RunOptions options;
  options.threads = threads > 0 ? threads : default_threads();
  options.output_dir = output;
  const RunResult r = run_experiment(config, options);
  std::string why;
  if (!verify_manifest(r.manifest, &why)) {
    std::cerr << "error: " << why << "\n";
    return 5;
  }
  for (const Artifact& a : r.artifacts) std::cout << (r.output_dir / a.file).string() << "  " << a.rows << " rows\n";
  std::cout << r.manifest.string() << "\n";
  return 0;
}

int validate(const std::string& config_path) {
  ValidationReport report;
  try {
    report = validate_config(load_config(config_path));
  } catch (const ConfigError& e) {
    report.violations.push_back({e.key(), e.message(), false});
  }
  std::cout << report.to_json();
  return report.valid() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum thermometry experiments"};
  app.set_version_flag("--version", toolkit_version());
  app.require_subcommand(1);

  std::string config_path, output;
  int threads = 0;
  std::string chosen;
  for (const auto& name : experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "key = value config file (defaults when omitted)")->check(CLI::ExistingFile);
    sub->add_option("--threads", threads, "worker threads (default: QTHERM_THREADS, else all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--output", output, "output directory (overrides output_path)");
    sub->callback([&chosen, name] { chosen = name; });
  }
  auto* val = app.add_subcommand("validate", "dry-run a config and print a JSON report");
  val->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  val->callback([&chosen] { chosen = "validate"; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (chosen == "validate") return validate(config_path);
    return run(chosen, config_path, threads, output);
  } catch (const qtherm::ResourceGuard& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
