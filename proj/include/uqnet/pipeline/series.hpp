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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace uqnet::pipeline {

// Calendar quarter, labelled "YYYY-Qn".
struct Quarter {
  int year = 2000;
  int q = 1;  // 1..4

  static Quarter parse(const std::string& label);
  std::string label() const;
  Quarter plus(int quarters) const;
  int ordinal() const { return year * 4 + (q - 1); }
  friend bool operator==(const Quarter&, const Quarter&) = default;
};

struct SeriesSchema {
  std::string name;
  std::vector<std::string> columns;       // value columns, after "date"
  std::map<std::string, double> scale;    // column -> factor applied on ingest
};

// The gas-factors and elec-factors schemas.
const SeriesSchema& series_schema(const std::string& name);
std::vector<std::string> series_schema_names();

// Consecutive quarters with one row of named values each. Values are stored
// after ingest scaling; `scale` records the factor per column (1 if none).
struct QuarterSeries {
  std::string schema;
  std::vector<std::string> quarters;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // quarters x columns
  std::map<std::string, double> scale;

  Eigen::Index size() const { return values.rows(); }
  bool has_column(const std::string& name) const;
  Eigen::Index column_index(const std::string& name) const;
  Eigen::VectorXd column(const std::string& name) const;
  double scale_of(const std::string& name) const;

  // Values in the units of the source file.
  Eigen::MatrixXd raw_values() const;

  // Checks label order, gaps, duplicates and shape.
  void validate() const;
};

// Parses CSV text with a "date" column of quarter labels and the schema's
// value columns (any order; extra columns are ignored).
QuarterSeries ingest(std::istream& csv, const std::string& schema);
QuarterSeries ingest_file(const std::filesystem::path& path, const std::string& schema);

void write_series_csv(std::ostream& out, const QuarterSeries& series, bool raw_units = true);

}  // namespace uqnet::pipeline
