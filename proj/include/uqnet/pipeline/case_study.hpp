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
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "uqnet/dlm/model.hpp"
#include "uqnet/gp/diagnostics.hpp"
#include "uqnet/gp/fit.hpp"
#include "uqnet/network/graph.hpp"
#include "uqnet/pipeline/forecast.hpp"
#include "uqnet/pipeline/scenario.hpp"
#include "uqnet/pipeline/store.hpp"
#include "uqnet/simulators/simulators.hpp"

namespace uqnet::pipeline {

// Emulator trained on the first `train` runs of a seeded maximin LHC
// ensemble of a simulator; the remaining runs are kept for validation.
struct EmulatorConfig {
  simulators::SimulatorKind simulator = simulators::SimulatorKind::kHeatDemand;
  Eigen::Index runs = 100;
  Eigen::Index train = 80;
  std::uint64_t seed = 1;
};

struct DlmConfig {
  std::string schema;
  std::string data;  // key into CaseStudyConfig::data
  std::string output;
  std::vector<std::string> regressors;  // "const" is the intercept
  bool fix_evolution_zero = false;
};

struct CaseStudyConfig {
  std::string id = "case-study";
  std::map<std::string, std::filesystem::path> data;  // resolved paths
  std::map<std::string, EmulatorConfig> emulators;
  gp::HyperparamSearchConfig search;
  std::map<std::string, DlmConfig> dlms;
  network::GraphDef graph;
  std::vector<Scenario> scenarios;
  ForecastOptions forecast;

  // Relative data paths are resolved against `base_dir`.
  static CaseStudyConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
  static CaseStudyConfig load(const std::filesystem::path& path);

  const Scenario& scenario(const std::string& name) const;
};

struct FittedEmulator {
  std::shared_ptr<const gp::GpEmulator> emulator;
  gp::Design validation;
};

FittedEmulator fit_emulator(const EmulatorConfig& config, const gp::HyperparamSearchConfig& search);

// Fits the DLM on the named columns of an ingested series.
dlm::DlmModel fit_dlm(const DlmConfig& config, const QuarterSeries& series);

// Models referenced by the config, fitted in memory or taken from / saved to
// a store.
struct CaseStudyModels {
  std::map<std::string, FittedEmulator> emulators;
  std::map<std::string, std::shared_ptr<const dlm::DlmModel>> dlms;
};

CaseStudyModels fit_case_study_models(const CaseStudyConfig& config);

// Loads models present in the store and fits (and saves) the missing ones.
CaseStudyModels ensure_case_study_models(const CaseStudyConfig& config, ModelStore& store);

GraphModels build_case_study_graph(const CaseStudyConfig& config, const CaseStudyModels& models);

struct CaseStudyResult {
  CaseStudyModels models;
  std::map<std::string, std::vector<gp::HoldoutRecord>> holdout;  // per emulator
  std::vector<ScenarioForecast> forecasts;                         // per scenario, config order
};

// Fits everything, then evaluates every scenario with filter and forecast
// rows. Deterministic given the config.
CaseStudyResult run_case_study(const CaseStudyConfig& config);
CaseStudyResult run_case_study(const CaseStudyConfig& config, const CaseStudyModels& models);

}  // namespace uqnet::pipeline
