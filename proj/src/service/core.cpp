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

#include "uqnet/service/core.hpp"

#include <sstream>

#include "uqnet/dlm/model.hpp"
#include "uqnet/gp/diagnostics.hpp"
#include "uqnet/gp/fit.hpp"
#include "uqnet/gp/serialize.hpp"
#include "uqnet/pipeline/case_study.hpp"
#include "uqnet/pipeline/forecast.hpp"
#include "uqnet/simulators/simulators.hpp"

namespace uqnet::service {

using nlohmann::json;
using pipeline::ModelStore;

namespace {

Error bad_request(const std::string& message, const std::string& field) {
  return invalid_argument("invalid_request", message, {{"field", field}});
}

std::string require_string(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key) || !body[key].is_string()) {
    throw bad_request(std::string("request needs a string '") + key + "'", key);
  }
  return body[key].get<std::string>();
}

template <typename T>
T optional_field(const json& body, const char* key, T fallback) {
  if (!body.is_object() || !body.contains(key)) return fallback;
  try {
    return body[key].get<T>();
  } catch (const json::exception&) {
    throw bad_request(std::string("field '") + key + "' has the wrong type", key);
  }
}

gp::HyperparamSearchConfig search_config(const json& body) {
  gp::HyperparamSearchConfig c;
  if (!body.is_object() || !body.contains("search")) return c;
  const json& s = body["search"];
  c.restarts = optional_field(s, "restarts", c.restarts);
  c.seed = optional_field(s, "seed", c.seed);
  c.max_evaluations = optional_field(s, "max_evaluations", c.max_evaluations);
  c.estimate_nugget = optional_field(s, "estimate_nugget", c.estimate_nugget);
  c.fixed_nugget = optional_field(s, "fixed_nugget", c.fixed_nugget);
  if (c.restarts < 1) throw bad_request("search.restarts must be at least 1", "search.restarts");
  return c;
}

gp::Design design_from_json(const json& d) {
  gp::Design design;
  try {
    for (const auto& dom : d.at("domains")) design.domains.push_back({dom.at(0).get<double>(), dom.at(1).get<double>()});
    const auto& x = d.at("X");
    const auto p = static_cast<Eigen::Index>(design.domains.size());
    design.inputs.resize(static_cast<Eigen::Index>(x.size()), p);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto row = x[i].get<std::vector<double>>();
      require_same_dimension("design row", p, static_cast<long>(row.size()));
      for (Eigen::Index j = 0; j < p; ++j) design.inputs(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)];
    }
    const auto f = d.at("F").get<std::vector<double>>();
    require_same_dimension("outputs F", design.inputs.rows(), static_cast<long>(f.size()));
    design.outputs = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
    if (d.contains("input_names")) design.input_names = d["input_names"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw bad_request(std::string("malformed design: ") + e.what(), "design");
  }
  return design;
}

json fit_summary(const gp::GpEmulator& em) {
  const auto& r = em.fit_report();
  return {{"log_posterior", r.log_posterior}, {"restart_index", r.restart_index}, {"evaluations", r.evaluations},
          {"seed", r.seed}};
}

}  // namespace

Core::Core(std::filesystem::path store_dir) : store_(std::move(store_dir)) {}

json Core::fit_gp(const json& body) {
  const std::string id = require_string(body, "id");
  pipeline::validate_id(id);
  if (store_.contains(ModelStore::Collection::kModels, id) && !optional_field(body, "overwrite", false)) {
    throw Error(ErrorKind::kConflict, "duplicate_id", "model id '" + id + "' already exists", {{"id", id}});
  }
  const gp::HyperparamSearchConfig search = search_config(body);
  std::shared_ptr<const gp::GpEmulator> em;
  if (body.contains("design")) {
    em = std::make_shared<const gp::GpEmulator>(gp::fit_gp(design_from_json(body["design"]), search));
  } else {
    pipeline::EmulatorConfig ec;
    ec.simulator = simulators::parse_simulator(require_string(body, "simulator"));
    const bool heat = ec.simulator == simulators::SimulatorKind::kHeatDemand;
    ec.runs = optional_field<Eigen::Index>(body, "runs", heat ? 100 : 160);
    ec.train = optional_field<Eigen::Index>(body, "train", heat ? 80 : 120);
    ec.seed = optional_field<std::uint64_t>(body, "seed", 1);
    if (ec.train < 1 || ec.train > ec.runs) throw bad_request("train must lie in [1, runs]", "train");
    em = pipeline::fit_emulator(ec, search).emulator;
  }
  pipeline::save_gp(store_, id, *em, optional_field(body, "overwrite", false));
  return {{"id", id}, {"kind", "gp"}, {"fit", fit_summary(*em)}, {"model", gp::to_json(*em)}};
}

json Core::fit_dlm(const json& body) {
  const std::string id = require_string(body, "id");
  pipeline::validate_id(id);
  if (store_.contains(ModelStore::Collection::kModels, id) && !optional_field(body, "overwrite", false)) {
    throw Error(ErrorKind::kConflict, "duplicate_id", "model id '" + id + "' already exists", {{"id", id}});
  }
  pipeline::DlmConfig dc;
  dc.schema = require_string(body, "schema");
  dc.output = require_string(body, "output");
  const auto& schema = pipeline::series_schema(dc.schema);
  if (body.contains("regressors")) {
    dc.regressors = optional_field<std::vector<std::string>>(body, "regressors", {});
  } else {
    dc.regressors.push_back("const");
    for (const auto& c : schema.columns)
      if (c != dc.output) dc.regressors.push_back(c);
  }
  dc.fix_evolution_zero = optional_field(body, "fix_evolution_zero", false);
  std::istringstream csv(require_string(body, "csv"));
  const pipeline::QuarterSeries series = pipeline::ingest(csv, dc.schema);
  const dlm::DlmModel model = pipeline::fit_dlm(dc, series);
  pipeline::save_dlm(store_, id, model, optional_field(body, "overwrite", false));
  return {{"id", id},
          {"kind", "dlm"},
          {"fit", {{"V", model.spec.obs_variance}, {"w", model.spec.evolution_variance}, {"log_posterior", model.log_posterior}}},
          {"model", dlm::to_json(model)}};
}

json Core::get_model(const std::string& id) const { return store_.get(ModelStore::Collection::kModels, id); }

json Core::create_graph(const json& body, bool overwrite) {
  network::GraphDef def = network::graph_def_from_json(body);
  if (def.id.empty()) throw bad_request("graph needs an 'id'", "id");
  pipeline::validate_id(def.id);
  // Builds the graph to validate bindings against the stored models.
  (void)network::NodeGraph::build(def, pipeline::store_resolver(store_));
  pipeline::save_graph(store_, def, overwrite || optional_field(body, "overwrite", false));
  return network::to_json(def);
}

json Core::run_forecast(const std::string& graph_id, const json& body, const json& scenario_doc) const {
  pipeline::ForecastOptions opt;
  if (!body.is_object() || !body.contains("horizon")) throw bad_request("request needs a 'horizon'", "horizon");
  opt.horizon = optional_field(body, "horizon", 0);
  opt.include_filter = optional_field(body, "include_filter", false);
  opt.burn_in = optional_field(body, "burn_in", opt.burn_in);
  opt.zero_parent_variance = optional_field(body, "zero_parent_variance", false);
  opt.mode = pipeline::parse_shock_mode(optional_field<std::string>(body, "mode", "output"));
  if (body.contains("origin")) opt.origin = optional_field<std::string>(body, "origin", "");
  opt.validate();
  const pipeline::Scenario scenario = pipeline::scenario_from_json(scenario_doc);

  const pipeline::GraphModels models = pipeline::load_graph_models(store_, graph_id);
  const pipeline::ScenarioForecast f = pipeline::forecast_scenario(models, scenario, opt);
  json rows = json::array(), composite = json::array(), plain = json::array(), parents = json::array();
  for (const auto& r : f.rows) {
    json j = pipeline::to_json(r);
    rows.push_back(j);
    (r.model == "composite" ? composite : plain).push_back(j);
  }
  for (const auto& n : f.nodes) {
    if (n.node != models.graph.target()) parents.push_back(pipeline::to_json(n));
  }
  return {{"graph", graph_id},
          {"scenario", pipeline::to_json(scenario)},
          {"target", models.graph.target()},
          {"mode", pipeline::to_string(opt.mode)},
          {"rows", rows},
          {"composite", composite},
          {"plain", plain},
          {"parents", parents}};
}

json Core::forecast(const std::string& graph_id, const json& body) const {
  const json scenario = body.is_object() && body.contains("scenario") ? body["scenario"] : json("scenario1");
  return run_forecast(graph_id, body, scenario);
}

json Core::scenario(const std::string& graph_id, const json& body) const {
  if (!body.is_object()) throw bad_request("scenario request must be a JSON object", "$");
  json s = body.contains("scenario") ? body["scenario"] : json::object();
  if (s.is_object()) {
    for (const char* key : {"name", "preset", "factors", "offsets", "overrides"}) {
      if (body.contains(key)) s[key] = body[key];
    }
    if (s.empty()) throw bad_request("scenario request needs a 'name'", "name");
  }
  return run_forecast(graph_id, body, s);
}

json Core::diagnostics(const std::string& id) const {
  const std::string kind = pipeline::model_kind(store_, id);
  if (kind == "gp") {
    const gp::GpEmulator em = pipeline::load_gp(store_, id);
    const auto records = gp::loo_diagnostics(em);
    json rows = json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      json row = {{"index", i},
                  {"point", std::vector<double>(r.point.data(), r.point.data() + r.point.size())},
                  {"observed", r.observed},
                  {"mean", r.mean},
                  {"sd", r.sd},
                  {"within_two_sd", r.within_two_sd}};
      if (r.error) row["error"] = *r.error;
      rows.push_back(row);
    }
    return {{"id", id}, {"kind", "gp"}, {"method", "leave-one-out"}, {"coverage", gp::coverage(records)}, {"rows", rows}};
  }
  const dlm::DlmModel model = pipeline::load_dlm(store_, id);
  const dlm::FilterRun run = model.refilter();
  json rows = json::array();
  std::size_t inside = 0, counted = 0;
  for (std::size_t t = 0; t < run.one_step.size(); ++t) {
    const auto& s = run.one_step[t];
    const double y = model.observations[t];
    const bool ok = gp::within_two_sd(y, s.f, std::sqrt(s.Q));
    if (!std::isnan(y)) {
      ++counted;
      inside += ok ? 1 : 0;
    }
    rows.push_back({{"quarter", model.quarters[t]}, {"observed", std::isnan(y) ? json(nullptr) : json(y)},
                    {"mean", s.f}, {"sd", std::sqrt(s.Q)}, {"within_two_sd", ok}});
  }
  return {{"id", id},
          {"kind", "dlm"},
          {"method", "one-step-ahead"},
          {"coverage", counted ? static_cast<double>(inside) / static_cast<double>(counted) : 0.0},
          {"rows", rows}};
}

json Core::health() const { return {{"status", "ok"}}; }

json error_body(const Error& e) { return {{"code", e.code()}, {"message", e.what()}, {"context", e.context()}}; }

int http_status(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kParse: return 400;
    case ErrorKind::kNotFound: return 404;
    case ErrorKind::kConflict: return 409;
    default: return 500;
  }
}

int exit_code(const Error& e) {
  return e.kind() == ErrorKind::kInvalidArgument || e.kind() == ErrorKind::kParse ? 2 : 1;
}

}  // namespace uqnet::service
