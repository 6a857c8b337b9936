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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "uqnet/dlm/dlm.hpp"

namespace uqnet::dlm {

inline constexpr int kModelVersion = 1;

// A fitted DLM together with what is needed to re-run it on its source data:
// the series schema, the column names of y and F, and the ingestion scale
// factors applied to each regressor.
struct DlmModel {
  std::string schema;
  std::string output_name;
  std::vector<std::string> regressor_names;  // "const" denotes the intercept
  std::vector<double> scale_factors;
  DlmSpec spec;
  FilterState state;  // posterior after the last observation
  std::uint64_t data_digest = 0;
  double log_posterior = 0.0;
  double prior_scale = 1e6;

  // Data the model was fitted on (scaled units): quarter labels, y and the
  // regression vectors, one row per quarter.
  std::vector<std::string> quarters;
  std::vector<double> observations;
  Eigen::MatrixXd regressors;

  // Filter run over the stored history; reproduces `state` bit for bit.
  FilterRun refilter() const;
};

// Fits V and w by MAP and filters the whole series.
DlmModel fit_dlm_model(std::string schema, std::string output_name, std::vector<std::string> regressor_names,
                       std::vector<double> scale_factors, std::vector<std::string> quarters,
                       std::vector<double> observations, Eigen::MatrixXd regressors,
                       const PrecisionPrior& prior = {}, const PrecisionFitOptions& options = {});

// FNV-1a over the bit patterns of y and F.
std::uint64_t data_digest(std::span<const double> observations, const Eigen::MatrixXd& regressors);

// {version, kind, schema, output, regressor_names, scale_factors, V, w, m, C, t,
//  data_digest, prior_scale, log_posterior, history: {quarters, y, F}}
nlohmann::json to_json(const DlmModel& model);
DlmModel dlm_model_from_json(const nlohmann::json& doc);

}  // namespace uqnet::dlm
