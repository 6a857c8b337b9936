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

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "uqnet/pipeline/series.hpp"

namespace uqnet::pipeline {

// Shocks applied over the forecast horizon: multiplicative factors and
// additive offsets (in source units) on named series, and replacement values
// for named parameters.
struct Scenario {
  std::string name;
  std::map<std::string, double> factors;
  std::map<std::string, double> offsets;
  std::map<std::string, double> overrides;

  void validate() const;
  bool is_identity() const { return factors.empty() && offsets.empty() && overrides.empty(); }
};

// scenario1 (baseline), scenario2 (gas and electricity +25%), scenario3
// (electricity +30%, gas +65%, imports +40%, storage -50%).
Scenario preset_scenario(const std::string& name);
std::vector<std::string> preset_scenario_names();

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& doc);

// Applies a then b. Factors multiply, offsets add (a's offsets are scaled by
// b's factors), overrides of b win.
Scenario compose(const Scenario& a, const Scenario& b);

// Series and parameters a scenario acts on. Parameters are either a single
// value or four quarter-of-year values.
struct ScenarioInputs {
  std::vector<QuarterSeries> series;
  std::map<std::string, std::vector<double>> params;
};

// Extends every series by `horizon` quarters carrying the last observed row
// forward, then applies the scenario to the appended rows only; parameters
// take the scenario's overrides. Every name in the scenario must match a
// series column or a parameter.
ScenarioInputs apply_scenario(const ScenarioInputs& inputs, const Scenario& scenario, int horizon);

}  // namespace uqnet::pipeline
