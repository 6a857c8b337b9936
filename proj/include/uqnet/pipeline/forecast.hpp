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

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "uqnet/dlm/model.hpp"
#include "uqnet/network/graph.hpp"
#include "uqnet/pipeline/scenario.hpp"
#include "uqnet/pipeline/store.hpp"

namespace uqnet::pipeline {

// Where a price shock on a DLM output acts. kOutput scales the shocked
// node's output only on its edges into GP nodes; kInput scales the node's
// output itself, so the shock also reaches DLMs that regress on it.
enum class PriceShockMode { kOutput, kInput };

PriceShockMode parse_shock_mode(const std::string& s);
const char* to_string(PriceShockMode mode);

// A built graph with its DLM models and their filter runs, keyed by node id.
struct GraphModels {
  network::NodeGraph graph;
  std::map<std::string, std::shared_ptr<const dlm::DlmModel>> dlms;
  std::map<std::string, dlm::FilterRun> runs;
};

GraphModels assemble_graph(const network::GraphDef& def,
                           const std::function<std::shared_ptr<const gp::GpEmulator>(const std::string&)>& gp_model,
                           const std::function<std::shared_ptr<const dlm::DlmModel>(const std::string&)>& dlm_model);
GraphModels load_graph_models(const ModelStore& store, const std::string& graph_id);

struct ForecastOptions {
  int horizon = 4;
  bool include_filter = false;   // also emit one-step rows over the history
  int burn_in = 6;               // history quarters skipped before one-step rows
  PriceShockMode mode = PriceShockMode::kOutput;
  bool zero_parent_variance = false;
  std::optional<std::string> origin;  // last observed quarter when the graph has no DLM

  void validate() const;
};

// One (mean, variance) of the target node. model is "composite" (moments
// propagated through the graph) or "plain" (target model at its parents'
// means, no parent uncertainty).
struct ForecastRow {
  std::string scenario;
  std::string quarter;
  std::string step_kind;  // "filter" or "forecast"
  int step = 0;           // forecast lead time, 0 for filter rows
  std::string model;
  double mean = 0.0;
  double variance = 0.0;
};

// Composite moments of a non-exogenous node.
struct NodeRow {
  std::string scenario;
  std::string quarter;
  std::string step_kind;
  int step = 0;
  std::string node;
  double mean = 0.0;
  double variance = 0.0;
};

struct ScenarioForecast {
  Scenario scenario;
  std::vector<ForecastRow> rows;
  std::vector<NodeRow> nodes;
};

ScenarioForecast forecast_scenario(const GraphModels& models, const Scenario& scenario, const ForecastOptions& options);

// Scenarios are evaluated concurrently; results keep the input order.
std::vector<ScenarioForecast> forecast_scenarios(const GraphModels& models, std::span<const Scenario> scenarios,
                                                 const ForecastOptions& options);

// scenario,quarter,step_kind,step,model,mean,variance with 17 significant digits.
void write_forecast_csv(std::ostream& out, std::span<const ScenarioForecast> results);
nlohmann::json to_json(const ForecastRow& row);
nlohmann::json to_json(const NodeRow& row);

}  // namespace uqnet::pipeline
