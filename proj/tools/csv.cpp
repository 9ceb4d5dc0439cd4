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

#include "qtherm/cli/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qtherm/errors.hpp"

namespace qtherm::cli {

namespace {

constexpr auto T = ColumnType::Text;
constexpr auto I = ColumnType::Integer;
constexpr auto R = ColumnType::Real;

std::vector<Schema> make_schemas() {
  return {
      {"lqts-sweep",
       1,
       {{"model", T}, {"L", I}, {"param", R}, {"beta", R}, {"n_A", I}, {"s_A", R}, {"variance_H", R}, {"s_a", R},
        {"q_A_over_q", R}}},
      {"lqts-scaling",
       1,
       {{"model", T}, {"L", I}, {"n_A", I}, {"n_A_over_L", R}, {"beta", R}, {"param", R}, {"s_A", R},
        {"variance_H", R}, {"used_in_fit", I}}},
      {"lqts-scaling-fit", 1, {{"model", T}, {"mode", T}, {"slope", R}, {"slope_stderr", R}, {"points", I}}},
      {"fisher-compare",
       1,
       {{"protocol", T}, {"N", I}, {"tau_gamma", R}, {"T", R}, {"n_th", R}, {"fisher_value", R}, {"input_class", T}}},
      {"fisher-gap",
       1,
       {{"N", I}, {"tau_gamma", R}, {"T", R}, {"n_th", R}, {"gap_iid", R}, {"gap_sequential", R}, {"ratio", R}}},
      {"discrimination",
       1,
       {{"t_gamma", R}, {"r0_class", T}, {"distance", R}, {"t_relax_hot", R}, {"t_relax_cold", R}}},
      {"discrimination-optimum", 1, {{"t_gamma", R}, {"theta", R}, {"distance", R}}},
      {"optimal-probe",
       1,
       {{"M", I}, {"T", R}, {"level", I}, {"energy", R}, {"variance", R}, {"gap", R}, {"degeneracy_spread", R}}},
      {"heisenberg-toy",
       1,
       {{"N", I}, {"mode", T}, {"rmse", R}, {"temperature_rmse", R}, {"phase_bound", R}}},
  };
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "csv line " << line << ": " << what;
  throw InvalidArgument(os.str());
}

}  // namespace

const std::vector<Schema>& all_schemas() {
  static const std::vector<Schema> schemas = make_schemas();
  return schemas;
}

const Schema& schema(const std::string& name) {
  for (const auto& s : all_schemas())
    if (s.name == name) return s;
  throw InvalidArgument("unknown csv schema '" + name + "'");
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < schema->columns.size(); ++i)
    if (schema->columns[i].name == name) return i;
  throw InvalidArgument("schema " + schema->name + " has no column '" + name + "'");
}

double Table::real(std::size_t row, const std::string& name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* v = std::get_if<double>(&c)) return *v;
  return static_cast<double>(std::get<long long>(c));
}

long long Table::integer(std::size_t row, const std::string& name) const {
  return std::get<long long>(rows.at(row).at(column(name)));
}

const std::string& Table::text(std::size_t row, const std::string& name) const {
  return std::get<std::string>(rows.at(row).at(column(name)));
}

std::string format_csv(const Table& table) {
  const Schema& s = *table.schema;
  std::ostringstream os;
  os << "# qtherm-csv schema=" << s.name << " version=" << s.version << "\n";
  for (std::size_t i = 0; i < s.columns.size(); ++i) os << (i ? "," : "") << s.columns[i].name;
  os << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != s.columns.size()) throw InvalidArgument("format_csv: row width does not match schema " + s.name);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      switch (s.columns[i].type) {
        case ColumnType::Text: {
          const auto& v = std::get<std::string>(row[i]);
          if (v.find_first_of(",\n\r") != std::string::npos) throw InvalidArgument("format_csv: text cell contains a separator");
          os << v;
          break;
        }
        case ColumnType::Integer:
          os << std::get<long long>(row[i]);
          break;
        case ColumnType::Real:
          os << format_real(std::get<double>(row[i]));
          break;
      }
    }
    os << "\n";
  }
  return os.str();
}

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  if (!std::getline(in, line)) fail(1, "empty file");
  ++n;
  std::string name;
  int version = 0;
  {
    std::istringstream hdr(line);
    std::string hash, tag, sch, ver;
    hdr >> hash >> tag >> sch >> ver;
    if (hash != "#" || tag != "qtherm-csv" || sch.rfind("schema=", 0) != 0 || ver.rfind("version=", 0) != 0)
      fail(n, "missing '# qtherm-csv schema=<name> version=<n>' line");
    name = sch.substr(7);
    try {
      version = std::stoi(ver.substr(8));
    } catch (const std::exception&) {
      fail(n, "bad version");
    }
  }
  Table t;
  t.schema = &schema(name);
  if (version != t.schema->version) fail(n, "schema " + name + " version " + std::to_string(version) + " is not supported");
  if (!std::getline(in, line)) fail(n + 1, "missing header row");
  ++n;
  const auto header = split(line);
  if (header.size() != t.schema->columns.size()) fail(n, "header has wrong column count for schema " + name);
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] != t.schema->columns[i].name)
      fail(n, "column " + std::to_string(i) + " is '" + header[i] + "', expected '" + t.schema->columns[i].name + "'");
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) fail(n, "empty line");
    const auto cells = split(line);
    if (cells.size() != header.size()) fail(n, "wrong number of cells");
    Row row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& c = cells[i];
      switch (t.schema->columns[i].type) {
        case ColumnType::Text:
          row.emplace_back(c);
          break;
        case ColumnType::Integer: {
          char* end = nullptr;
          errno = 0;
          const long long v = std::strtoll(c.c_str(), &end, 10);
          if (c.empty() || *end != '\0' || errno) fail(n, "cell '" + c + "' is not an integer");
          row.emplace_back(v);
          break;
        }
        case ColumnType::Real: {
          char* end = nullptr;
          const double v = std::strtod(c.c_str(), &end);
          if (c.empty() || *end != '\0') fail(n, "cell '" + c + "' is not a number");
          row.emplace_back(v);
          break;
        }
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qtherm::cli
