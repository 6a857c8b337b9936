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

#include <chrono>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "uqnet/common/error.hpp"
#include "uqnet/pipeline/store.hpp"

namespace uqnet::service {

// Operations shared by the CLI and the HTTP service. Requests and responses
// are JSON documents; failures throw uqnet::Error.
class Core {
 public:
  explicit Core(std::filesystem::path store_dir);

  pipeline::ModelStore& store() { return store_; }

  // {id, simulator, runs?, train?, seed?, search?} fits on a simulator
  // ensemble; {id, design: {domains, input_names?, X, F}, search?} fits on
  // supplied runs. Returns {id, kind, fit, model}.
  nlohmann::json fit_gp(const nlohmann::json& body);

  // {id, schema, csv, output, regressors?, fix_evolution_zero?}.
  nlohmann::json fit_dlm(const nlohmann::json& body);

  nlohmann::json get_model(const std::string& id) const;

  // Graph definition with an id; every referenced model must exist.
  nlohmann::json create_graph(const nlohmann::json& body, bool overwrite = false);

  // {horizon, scenario?, mode?, include_filter?, burn_in?,
  //  zero_parent_variance?}. Without a scenario the baseline is used.
  nlohmann::json forecast(const std::string& graph_id, const nlohmann::json& body) const;

  // {name | preset | scenario object fields, horizon, ...}.
  nlohmann::json scenario(const std::string& graph_id, const nlohmann::json& body) const;

  // GP: leave-one-out table. DLM: one-step-ahead table over the history.
  nlohmann::json diagnostics(const std::string& id) const;

  nlohmann::json health() const;

 private:
  nlohmann::json run_forecast(const std::string& graph_id, const nlohmann::json& body,
                              const nlohmann::json& scenario) const;

  pipeline::ModelStore store_;
};

// {code, message, context}
nlohmann::json error_body(const Error& e);

// 400 validation, 404 unknown id, 409 duplicate id, 500 otherwise.
int http_status(const Error& e);

// 2 for validation errors, 1 for runtime failures.
int exit_code(const Error& e);

}  // namespace uqnet::service
