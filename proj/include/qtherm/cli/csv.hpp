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

// Versioned CSV artifacts. Each file starts with
//   # qtherm-csv schema=<name> version=<n>
// followed by a header row that must match the schema exactly. Reals are
// written with 17 significant digits so they round-trip losslessly.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace qtherm::cli {

enum class ColumnType { Text, Integer, Real };

struct Column {
  std::string name;
  ColumnType type;
};

struct Schema {
  std::string name;
  int version = 1;
  std::vector<Column> columns;
};

/// Every schema the CLI emits, looked up by name. Throws for unknown names.
const Schema& schema(const std::string& name);
const std::vector<Schema>& all_schemas();

using Cell = std::variant<std::string, long long, double>;
using Row = std::vector<Cell>;

struct Table {
  const Schema* schema = nullptr;
  std::vector<Row> rows;

  std::size_t column(const std::string& name) const;
  double real(std::size_t row, const std::string& name) const;
  long long integer(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;
};

/// Renders a table. Throws when a row does not match the schema.
std::string format_csv(const Table& table);

/// Parses and validates against the declared schema (name, version, header,
/// column count and cell types). Throws qtherm::InvalidArgument with the line number.
Table parse_csv(const std::string& text);
Table read_csv(const std::filesystem::path& path);

/// Writes through a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qtherm::cli
