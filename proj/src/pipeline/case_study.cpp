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

#include "uqnet/pipeline/case_study.hpp"

#include <fstream>
#include <future>

#include "uqnet/common/error.hpp"

namespace uqnet::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Error config_error(const std::string& message, const std::string& path) {
  return invalid_argument("invalid_config", message, {{"path", path}});
}

EmulatorConfig emulator_config(const json& doc, const std::string& path) {
  EmulatorConfig c;
  c.simulator = simulators::parse_simulator(doc.at("simulator").get<std::string>());
  c.runs = doc.value("runs", c.simulator == simulators::SimulatorKind::kHeatDemand ? 100 : 160);
  c.train = doc.value("train", c.simulator == simulators::SimulatorKind::kHeatDemand ? 80 : 120);
  c.seed = doc.value("seed", std::uint64_t{1});
  if (c.train < 1 || c.train > c.runs) throw config_error("train must lie in [1, runs]", path + ".train");
  return c;
}

}  // namespace

CaseStudyConfig CaseStudyConfig::from_json(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw config_error("config must be a JSON object", "$");
  CaseStudyConfig c;
  try {
    c.id = doc.value("id", c.id);
    if (doc.contains("data")) {
      for (const auto& [key, v] : doc.at("data").items()) {
        fs::path p = v.get<std::string>();
        c.data[key] = p.is_absolute() ? p : base_dir / p;
      }
    }
    if (doc.contains("emulators")) {
      for (const auto& [id, v] : doc.at("emulators").items()) c.emulators[id] = emulator_config(v, "emulators." + id);
    }
    if (doc.contains("search")) {
      const json& s = doc.at("search");
      c.search.restarts = s.value("restarts", c.search.restarts);
      c.search.seed = s.value("seed", c.search.seed);
      c.search.max_evaluations = s.value("max_evaluations", c.search.max_evaluations);
      c.search.estimate_nugget = s.value("estimate_nugget", c.search.estimate_nugget);
      c.search.fixed_nugget = s.value("fixed_nugget", c.search.fixed_nugget);
    }
    if (doc.contains("dlms")) {
      for (const auto& [id, v] : doc.at("dlms").items()) {
        DlmConfig d;
        d.schema = v.at("schema").get<std::string>();
        d.data = v.at("data").get<std::string>();
        d.output = v.at("output").get<std::string>();
        d.regressors = v.at("regressors").get<std::vector<std::string>>();
        d.fix_evolution_zero = v.value("fix_evolution_zero", false);
        if (!c.data.count(d.data)) throw config_error("dlm '" + id + "' refers to unknown data key '" + d.data + "'", "dlms." + id + ".data");
        c.dlms[id] = d;
      }
    }
    if (!doc.contains("graph")) throw config_error("config needs a 'graph'", "graph");
    c.graph = network::graph_def_from_json(doc.at("graph"));
    if (c.graph.id.empty()) c.graph.id = c.id;
    if (doc.contains("scenarios")) {
      for (const auto& s : doc.at("scenarios")) c.scenarios.push_back(scenario_from_json(s));
    } else {
      for (const auto& n : preset_scenario_names()) c.scenarios.push_back(preset_scenario(n));
    }
    c.forecast.horizon = doc.value("horizon", c.forecast.horizon);
    c.forecast.burn_in = doc.value("burn_in", c.forecast.burn_in);
    c.forecast.mode = parse_shock_mode(doc.value("shock_mode", std::string{"output"}));
    c.forecast.include_filter = true;
    c.forecast.validate();
  } catch (const json::exception& e) {
    throw config_error(std::string("malformed config: ") + e.what(), "$");
  }
  return c;
}

CaseStudyConfig CaseStudyConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kNotFound, "file_not_found", "cannot open config " + path.string(), {{"path", path.string()}});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error("invalid_config", "config " + path.string() + " is not valid JSON: " + e.what(), {{"path", path.string()}});
  }
  return from_json(doc, fs::absolute(path).parent_path());
}

const Scenario& CaseStudyConfig::scenario(const std::string& name) const {
  for (const auto& s : scenarios)
    if (s.name == name) return s;
  throw invalid_argument("unknown_scenario", "config defines no scenario '" + name + "'", {{"scenario", name}});
}

FittedEmulator fit_emulator(const EmulatorConfig& config, const gp::HyperparamSearchConfig& search) {
  const gp::Design ensemble = simulators::run_ensemble(config.simulator, config.runs, config.seed);
  FittedEmulator out;
  out.emulator = std::make_shared<const gp::GpEmulator>(gp::fit_gp(ensemble.head(config.train), search));
  if (config.runs > config.train) out.validation = ensemble.tail(config.runs - config.train);
  return out;
}

dlm::DlmModel fit_dlm(const DlmConfig& config, const QuarterSeries& series) {
  if (series.schema != config.schema) {
    throw invalid_argument("schema_mismatch", "series has schema '" + series.schema + "', expected '" + config.schema + "'",
                           {{"schema", series.schema}});
  }
  const Eigen::VectorXd y = series.column(config.output);
  const auto p = static_cast<Eigen::Index>(config.regressors.size());
  Eigen::MatrixXd f(series.size(), p);
  std::vector<double> scale;
  for (Eigen::Index j = 0; j < p; ++j) {
    const std::string& name = config.regressors[static_cast<std::size_t>(j)];
    if (name == "const") {
      f.col(j).setOnes();
      scale.push_back(1.0);
    } else {
      f.col(j) = series.column(name);
      scale.push_back(series.scale_of(name));
    }
  }
  dlm::PrecisionFitOptions options;
  options.fix_evolution_zero = config.fix_evolution_zero;
  return dlm::fit_dlm_model(config.schema, config.output, config.regressors, scale, series.quarters,
                            std::vector<double>(y.data(), y.data() + y.size()), f, {}, options);
}

CaseStudyModels fit_case_study_models(const CaseStudyConfig& config) {
  CaseStudyModels out;
  std::map<std::string, std::future<FittedEmulator>> jobs;
  for (const auto& [id, ec] : config.emulators) {
    jobs[id] = std::async(std::launch::async, [&ec = ec, &config] { return fit_emulator(ec, config.search); });
  }
  for (const auto& [id, dc] : config.dlms) {
    const QuarterSeries series = ingest_file(config.data.at(dc.data), dc.schema);
    out.dlms[id] = std::make_shared<const dlm::DlmModel>(fit_dlm(dc, series));
  }
  for (auto& [id, job] : jobs) out.emulators[id] = job.get();
  return out;
}

CaseStudyModels ensure_case_study_models(const CaseStudyConfig& config, ModelStore& store) {
  CaseStudyModels out;
  for (const auto& [id, ec] : config.emulators) {
    if (store.contains(ModelStore::Collection::kModels, id)) {
      FittedEmulator fe;
      fe.emulator = std::make_shared<const gp::GpEmulator>(load_gp(store, id));
      const gp::Design ensemble = simulators::run_ensemble(ec.simulator, ec.runs, ec.seed);
      if (ec.runs > ec.train) fe.validation = ensemble.tail(ec.runs - ec.train);
      out.emulators[id] = fe;
    } else {
      out.emulators[id] = fit_emulator(ec, config.search);
      save_gp(store, id, *out.emulators[id].emulator, true);
    }
  }
  for (const auto& [id, dc] : config.dlms) {
    if (store.contains(ModelStore::Collection::kModels, id)) {
      out.dlms[id] = std::make_shared<const dlm::DlmModel>(load_dlm(store, id));
    } else {
      const QuarterSeries series = ingest_file(config.data.at(dc.data), dc.schema);
      out.dlms[id] = std::make_shared<const dlm::DlmModel>(fit_dlm(dc, series));
      save_dlm(store, id, *out.dlms[id], true);
    }
  }
  return out;
}

GraphModels build_case_study_graph(const CaseStudyConfig& config, const CaseStudyModels& models) {
  return assemble_graph(
      config.graph,
      [&](const std::string& id) {
        auto it = models.emulators.find(id);
        if (it == models.emulators.end()) {
          throw Error(ErrorKind::kNotFound, "model_not_found", "config defines no emulator '" + id + "'", {{"id", id}});
        }
        return it->second.emulator;
      },
      [&](const std::string& id) {
        auto it = models.dlms.find(id);
        if (it == models.dlms.end()) {
          throw Error(ErrorKind::kNotFound, "model_not_found", "config defines no dlm '" + id + "'", {{"id", id}});
        }
        return it->second;
      });
}

CaseStudyResult run_case_study(const CaseStudyConfig& config) {
  return run_case_study(config, fit_case_study_models(config));
}

CaseStudyResult run_case_study(const CaseStudyConfig& config, const CaseStudyModels& models) {
  CaseStudyResult out;
  out.models = models;
  for (const auto& [id, fe] : models.emulators) {
    if (fe.validation.size() > 0) out.holdout[id] = gp::holdout_diagnostics(*fe.emulator, fe.validation);
  }
  const GraphModels graph = build_case_study_graph(config, models);
  out.forecasts = forecast_scenarios(graph, config.scenarios, config.forecast);
  return out;
}

}  // namespace uqnet::pipeline
