// Copyright 2026 The uqnet Authors
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

#include "uqnet/pipeline/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "uqnet/common/error.hpp"

namespace uqnet::pipeline {

Quarter Quarter::parse(const std::string& label) {
  Quarter out;
  int consumed = 0;
  if (label.size() == 7 && std::sscanf(label.c_str(), "%4d-Q%1d%n", &out.year, &out.q, &consumed) == 2 &&
      consumed == 7 && out.q >= 1 && out.q <= 4) {
    return out;
  }
  throw parse_error("bad_quarter", "'" + label + "' is not a quarter label of the form YYYY-Qn", {{"label", label}});
}

std::string Quarter::label() const {
  std::ostringstream s;
  s << std::setw(4) << std::setfill('0') << year << "-Q" << q;
  return s.str();
}

Quarter Quarter::plus(int quarters) const {
  const int ord = ordinal() + quarters;
  return {ord / 4, ord % 4 + 1};
}

const SeriesSchema& series_schema(const std::string& name) {
  static const std::map<std::string, SeriesSchema> schemas = {
      {"gas-factors",
       {"gas-factors",
        {"gas_price", "prod", "imports", "storage", "coal"},
        {{"prod", 1e-5}, {"imports", 1e-5}, {"storage", 1e-5}}}},
      {"elec-factors", {"elec-factors", {"elec_price", "gas_price", "ets", "offshore_wind"}, {}}},
  };
  auto it = schemas.find(name);
  if (it == schemas.end()) {
    throw invalid_argument("unknown_schema", "unknown series schema '" + name + "'", {{"schema", name}});
  }
  return it->second;
}

std::vector<std::string> series_schema_names() { return {"gas-factors", "elec-factors"}; }

bool QuarterSeries::has_column(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

Eigen::Index QuarterSeries::column_index(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw invalid_argument("unknown_series", "series has no column '" + name + "'", {{"column", name}, {"schema", schema}});
  }
  return static_cast<Eigen::Index>(it - columns.begin());
}

Eigen::VectorXd QuarterSeries::column(const std::string& name) const { return values.col(column_index(name)); }

double QuarterSeries::scale_of(const std::string& name) const {
  auto it = scale.find(name);
  return it == scale.end() ? 1.0 : it->second;
}

Eigen::MatrixXd QuarterSeries::raw_values() const {
  Eigen::MatrixXd raw = values;
  for (Eigen::Index j = 0; j < raw.cols(); ++j) raw.col(j) /= scale_of(columns[static_cast<std::size_t>(j)]);
  return raw;
}

void QuarterSeries::validate() const {
  require_same_dimension("series rows", static_cast<long>(quarters.size()), values.rows());
  require_same_dimension("series columns", static_cast<long>(columns.size()), values.cols());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < quarters.size(); ++i) {
    const Quarter q = Quarter::parse(quarters[i]);
    if (!seen.insert(quarters[i]).second) {
      throw parse_error("duplicate_quarter", "quarter " + quarters[i] + " appears more than once",
                        {{"label", quarters[i]}, {"row", std::to_string(i + 1)}});
    }
    if (i == 0) continue;
    const Quarter prev = Quarter::parse(quarters[i - 1]);
    if (q.ordinal() <= prev.ordinal()) {
      throw parse_error("quarter_order", "quarter " + quarters[i] + " does not follow " + quarters[i - 1],
                        {{"label", quarters[i]}, {"row", std::to_string(i + 1)}});
    }
    if (q.ordinal() != prev.ordinal() + 1) {
      throw parse_error("quarter_gap", "gap in quarters: expected " + prev.plus(1).label() + ", found " + quarters[i],
                        {{"label", quarters[i]}, {"expected", prev.plus(1).label()}, {"row", std::to_string(i + 1)}});
    }
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw parse_error("bad_number", "row " + std::to_string(row) + ", column '" + column + "': '" + cell +
                                        "' is not a number",
                      {{"row", std::to_string(row)}, {"column", column}, {"value", cell}});
  }
  return v;
}

}  // namespace

QuarterSeries ingest(std::istream& csv, const std::string& schema_name) {
  const SeriesSchema& schema = series_schema(schema_name);
  std::string line;
  if (!std::getline(csv, line)) throw parse_error("empty_csv", "CSV has no header row");
  const auto header = split_csv_line(line);
  auto find = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw parse_error("missing_column", "CSV header lacks column '" + name + "' required by schema " + schema.name,
                        {{"column", name}, {"row", "1"}, {"schema", schema.name}});
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t date_col = find("date");
  std::vector<std::size_t> value_cols;
  for (const auto& c : schema.columns) value_cols.push_back(find(c));

  QuarterSeries out;
  out.schema = schema.name;
  out.columns = schema.columns;
  for (const auto& c : schema.columns) out.scale[c] = schema.scale.count(c) ? schema.scale.at(c) : 1.0;

  std::vector<std::vector<double>> rows;
  std::size_t row = 1;
  while (std::getline(csv, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < header.size()) {
      throw parse_error("missing_value", "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                             " cells, header has " + std::to_string(header.size()),
                        {{"row", std::to_string(row)}});
    }
    try {
      Quarter::parse(cells[date_col]);
    } catch (Error& e) {
      throw std::move(e).with("row", std::to_string(row)).with("column", "date");
    }
    out.quarters.push_back(cells[date_col]);
    std::vector<double> values;
    for (std::size_t k = 0; k < value_cols.size(); ++k) {
      const std::string& name = schema.columns[k];
      values.push_back(parse_number(cells[value_cols[k]], row, name) * out.scale[name]);
    }
    rows.push_back(std::move(values));
  }
  out.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(schema.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  if (out.size() == 0) throw parse_error("empty_csv", "CSV has no data rows");
  try {
    out.validate();
  } catch (Error& e) {
    // validate() counts data rows from 1; shift past the header.
    if (e.context().count("row")) {
      const std::string r = std::to_string(std::stoul(e.context().at("row")) + 1);
      throw std::move(e).with("row", r);
    }
    throw;
  }
  return out;
}

QuarterSeries ingest_file(const std::filesystem::path& path, const std::string& schema) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kNotFound, "file_not_found", "cannot open " + path.string(), {{"path", path.string()}});
  }
  try {
    return ingest(in, schema);
  } catch (Error& e) {
    throw std::move(e).with("path", path.string());
  }
}

void write_series_csv(std::ostream& out, const QuarterSeries& series, bool raw_units) {
  const Eigen::MatrixXd v = raw_units ? series.raw_values() : series.values;
  out << "date";
  for (const auto& c : series.columns) out << ',' << c;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    out << series.quarters[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < v.cols(); ++j) out << ',' << v(i, j);
    out << '\n';
  }
}

}  // namespace uqnet::pipeline
