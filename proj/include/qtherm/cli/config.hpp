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

// Flat key = value experiment configs. '#' and ';' start comments. Sections
// and unknown keys are rejected; every key has a declared type and default.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qtherm/errors.hpp"

namespace qtherm::cli {

/// A config problem tied to one key. what() starts with "<key>: ".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string key, const std::string& message)
      : InvalidArgument(key + ": " + message), key_(std::move(key)), message_(message) {}
  const std::string& key() const { return key_; }
  const std::string& message() const { return message_; }

 private:
  std::string key_;
  std::string message_;
};

enum class KeyType { Integer, Real, Text, Bool, IntegerList, RealList, TextList };

struct KeySpec {
  std::string name;
  KeyType type;
  /// Used when the key is absent. "auto" is accepted for any type when allow_auto is set.
  std::string default_value;
  bool allow_auto = false;
  std::string help;
};

/// The experiments the runner knows, in CLI order.
const std::vector<std::string>& experiment_names();

/// Keys of one experiment, including the common keys experiment, seed and output_path.
const std::vector<KeySpec>& experiment_keys(const std::string& experiment);

class ExperimentConfig {
 public:
  std::string experiment;
  std::uint64_t seed = 1;
  std::string output_path;
  /// Every key of the experiment with its resolved text value, in declaration order.
  std::vector<std::pair<std::string, std::string>> entries;

  bool is_auto(const std::string& key) const;
  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  std::vector<long long> integers(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::string> texts(const std::string& key) const;

 private:
  const std::string& raw(const std::string& key) const;
};

/// Parses config text. `experiment` may come from the file or from
/// `fallback_experiment`; when both are given they must agree.
/// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(const std::string& text, const std::string& fallback_experiment = "");
ExperimentConfig load_config(const std::string& path, const std::string& fallback_experiment = "");

/// Builds a config from explicit overrides on top of the defaults.
ExperimentConfig make_config(const std::string& experiment,
                             const std::vector<std::pair<std::string, std::string>>& values = {});

/// key = value lines, parseable by parse_config.
std::string format_config(const ExperimentConfig& config);

}  // namespace qtherm::cli
