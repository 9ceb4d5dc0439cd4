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

#pragma once

// Experiment runner behind the qtherm executable: config validation (dry
// run), table computation, atomic artifact writing and the run manifest.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qtherm/cli/config.hpp"
#include "qtherm/cli/csv.hpp"

namespace qtherm::cli {

struct Violation {
  std::string key;
  std::string message;
  /// A desk-scale resource limit rather than a malformed value.
  bool resource_guard = false;
};

struct ValidationReport {
  std::string experiment;
  std::vector<Violation> violations;
  /// Dry-run sizes (matrix dimensions, branch counts, bytes), name -> value.
  std::vector<std::pair<std::string, double>> estimates;

  bool valid() const { return violations.empty(); }
  std::string to_json() const;
};

/// Checks every parameter against the module guards. Computes nothing.
ValidationReport validate_config(const ExperimentConfig& config);

struct NamedTable {
  std::string file;
  Table table;
};

/// Computes the experiment's tables in memory. Row order depends only on the
/// config, never on `threads`. Throws ConfigError or ResourceGuard when
/// validation fails.
std::vector<NamedTable> compute_tables(const ExperimentConfig& config, int threads = 1);

struct RunOptions {
  /// Empty selects config.output_path.
  std::filesystem::path output_dir;
  int threads = 1;
};

struct Artifact {
  std::string file;
  std::string schema;
  std::size_t rows = 0;
  std::size_t bytes = 0;
  std::string sha256;
};

struct RunResult {
  std::filesystem::path output_dir;
  std::vector<Artifact> artifacts;
  std::filesystem::path manifest;
  double seconds = 0.0;
};

inline constexpr const char* kManifestName = "manifest.json";

/// Validates, computes, writes every CSV atomically, then the manifest last.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options);

/// True iff the manifest parses and every listed file exists with the
/// recorded SHA-256. `why` receives the first problem.
bool verify_manifest(const std::filesystem::path& manifest, std::string* why = nullptr);

std::string sha256_hex(const std::string& bytes);

/// Toolkit version string.
const char* toolkit_version();

}  // namespace qtherm::cli
