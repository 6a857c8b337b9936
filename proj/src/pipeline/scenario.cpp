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

#include "uqnet/pipeline/scenario.hpp"

#include <cmath>

#include "uqnet/common/error.hpp"

namespace uqnet::pipeline {

using nlohmann::json;

void Scenario::validate() const {
  for (const auto& [series, f] : factors) {
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw invalid_argument("invalid_scenario", "scenario '" + name + "': factor on '" + series + "' must be positive",
                             {{"scenario", name}, {"series", series}});
    }
  }
  for (const auto& [series, v] : offsets) {
    if (!std::isfinite(v)) {
      throw invalid_argument("invalid_scenario", "scenario '" + name + "': offset on '" + series + "' is not finite",
                             {{"scenario", name}, {"series", series}});
    }
  }
  for (const auto& [param, v] : overrides) {
    if (!std::isfinite(v)) {
      throw invalid_argument("invalid_scenario", "scenario '" + name + "': override of '" + param + "' is not finite",
                             {{"scenario", name}, {"parameter", param}});
    }
  }
}

Scenario preset_scenario(const std::string& name) {
  if (name == "scenario1") return {"scenario1", {}, {}, {}};
  if (name == "scenario2") return {"scenario2", {{"gas_price", 1.25}, {"elec_price", 1.25}}, {}, {}};
  if (name == "scenario3") {
    return {"scenario3",
            {{"elec_price", 1.30}, {"gas_price", 1.65}, {"imports", 1.40}, {"storage", 0.50}},
            {},
            {}};
  }
  throw invalid_argument("unknown_scenario", "unknown scenario '" + name + "'", {{"scenario", name}});
}

std::vector<std::string> preset_scenario_names() { return {"scenario1", "scenario2", "scenario3"}; }

json to_json(const Scenario& s) {
  return {{"name", s.name}, {"factors", s.factors}, {"offsets", s.offsets}, {"overrides", s.overrides}};
}

Scenario scenario_from_json(const json& doc) {
  if (doc.is_string()) return preset_scenario(doc.get<std::string>());
  if (!doc.is_object()) throw invalid_argument("invalid_scenario", "scenario must be a name or an object");
  try {
    Scenario s;
    s.name = doc.value("name", std::string{"custom"});
    if (doc.contains("preset")) {
      s = preset_scenario(doc.at("preset").get<std::string>());
      s.name = doc.value("name", s.name);
    } else if (!doc.contains("factors") && !doc.contains("offsets") && !doc.contains("overrides") &&
               doc.contains("name")) {
      s = preset_scenario(s.name);
    }
    auto read = [&](const char* key, std::map<std::string, double>& into) {
      if (!doc.contains(key)) return;
      for (const auto& [k, v] : doc.at(key).items()) into[k] = v.get<double>();
    };
    read("factors", s.factors);
    read("offsets", s.offsets);
    read("overrides", s.overrides);
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw invalid_argument("invalid_scenario", std::string("malformed scenario: ") + e.what());
  }
}

Scenario compose(const Scenario& a, const Scenario& b) {
  Scenario out = a;
  out.name = a.is_identity() ? b.name : (b.is_identity() ? a.name : a.name + "+" + b.name);
  // (x f_a + o_a) f_b + o_b = x f_a f_b + (o_a f_b + o_b)
  for (const auto& [k, f] : b.factors) {
    out.factors[k] = (a.factors.count(k) ? a.factors.at(k) : 1.0) * f;
    if (out.offsets.count(k)) out.offsets[k] *= f;
  }
  for (const auto& [k, o] : b.offsets) out.offsets[k] += o;
  for (const auto& [k, v] : b.overrides) out.overrides[k] = v;
  return out;
}

ScenarioInputs apply_scenario(const ScenarioInputs& inputs, const Scenario& scenario, int horizon) {
  if (horizon < 0) throw invalid_argument("invalid_horizon", "horizon must be nonnegative");
  scenario.validate();
  auto is_series = [&](const std::string& name) {
    for (const auto& s : inputs.series)
      if (s.has_column(name)) return true;
    return false;
  };
  for (const auto* m : {&scenario.factors, &scenario.offsets}) {
    for (const auto& [name, v] : *m) {
      if (!is_series(name) && !inputs.params.count(name)) {
        throw invalid_argument("unknown_series", "scenario '" + scenario.name + "' refers to unknown series '" + name + "'",
                               {{"scenario", scenario.name}, {"series", name}});
      }
    }
  }
  for (const auto& [name, v] : scenario.overrides) {
    if (!inputs.params.count(name)) {
      throw invalid_argument("unknown_parameter",
                             "scenario '" + scenario.name + "' overrides unknown parameter '" + name + "'",
                             {{"scenario", scenario.name}, {"parameter", name}});
    }
  }

  ScenarioInputs out;
  for (const auto& s : inputs.series) {
    if (s.size() == 0) throw invalid_argument("empty_series", "cannot extend an empty series", {{"schema", s.schema}});
    QuarterSeries e = s;
    const Eigen::Index n = s.size();
    e.values.conservativeResize(n + horizon, Eigen::NoChange);
    const Quarter last = Quarter::parse(s.quarters.back());
    for (int j = 1; j <= horizon; ++j) {
      e.values.row(n + j - 1) = s.values.row(n - 1);
      e.quarters.push_back(last.plus(j).label());
    }
    for (Eigen::Index c = 0; c < e.values.cols(); ++c) {
      const std::string& name = e.columns[static_cast<std::size_t>(c)];
      auto f = scenario.factors.find(name);
      auto o = scenario.offsets.find(name);
      for (Eigen::Index t = n; t < n + horizon; ++t) {
        if (f != scenario.factors.end()) e.values(t, c) *= f->second;
        if (o != scenario.offsets.end()) e.values(t, c) += o->second * e.scale_of(name);
      }
    }
    out.series.push_back(std::move(e));
  }
  out.params = inputs.params;
  for (auto& [name, values] : out.params) {
    auto f = scenario.factors.find(name);
    auto o = scenario.offsets.find(name);
    auto v = scenario.overrides.find(name);
    for (double& x : values) {
      if (f != scenario.factors.end()) x *= f->second;
      if (o != scenario.offsets.end()) x += o->second;
      if (v != scenario.overrides.end()) x = v->second;
    }
  }
  return out;
}

}  // namespace uqnet::pipeline
