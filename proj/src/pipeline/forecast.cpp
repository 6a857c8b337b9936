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

#include "uqnet/pipeline/forecast.hpp"

#include <future>
#include <iomanip>
#include <ostream>

#include "uqnet/common/error.hpp"

namespace uqnet::pipeline {

using network::NodeKind;

PriceShockMode parse_shock_mode(const std::string& s) {
  if (s == "output") return PriceShockMode::kOutput;
  if (s == "input") return PriceShockMode::kInput;
  throw invalid_argument("invalid_shock_mode", "shock mode must be 'output' or 'input', got '" + s + "'",
                         {{"mode", s}});
}

const char* to_string(PriceShockMode mode) { return mode == PriceShockMode::kOutput ? "output" : "input"; }

void ForecastOptions::validate() const {
  if (horizon < 1) throw invalid_argument("invalid_horizon", "horizon must be ≥ 1", {{"horizon", std::to_string(horizon)}});
  if (burn_in < 0) throw invalid_argument("invalid_burn_in", "burn_in must be nonnegative");
}

GraphModels assemble_graph(const network::GraphDef& def,
                           const std::function<std::shared_ptr<const gp::GpEmulator>(const std::string&)>& gp_model,
                           const std::function<std::shared_ptr<const dlm::DlmModel>(const std::string&)>& dlm_model) {
  std::map<std::string, std::shared_ptr<const dlm::DlmModel>> by_model;
  for (const auto& n : def.nodes) {
    if (n.kind == NodeKind::kDlm && !by_model.count(n.model)) by_model[n.model] = dlm_model(n.model);
  }
  network::ModelResolver resolver;
  resolver.gp = gp_model;
  resolver.dlm_regressors = [&](const std::string& id) { return by_model.at(id)->regressor_names; };
  GraphModels out{network::NodeGraph::build(def, resolver), {}, {}};

  std::optional<std::string> last;
  std::size_t length = 0;
  for (const auto& n : def.nodes) {
    if (n.kind != NodeKind::kDlm) continue;
    const auto& model = by_model.at(n.model);
    if (model->quarters.empty()) {
      throw invalid_argument("missing_history", "dlm model '" + n.model + "' carries no data history",
                             {{"node", n.id}, {"model", n.model}});
    }
    if (last && (*last != model->quarters.back() || length != model->quarters.size())) {
      throw invalid_argument("misaligned_series",
                             "dlm node '" + n.id + "' covers different quarters from the other dlm nodes",
                             {{"node", n.id}, {"last_quarter", model->quarters.back()}, {"expected", *last}});
    }
    last = model->quarters.back();
    length = model->quarters.size();
    out.dlms[n.id] = model;
    out.runs[n.id] = model->refilter();
  }
  return out;
}

GraphModels load_graph_models(const ModelStore& store, const std::string& graph_id) {
  const network::GraphDef def = load_graph(store, graph_id);
  return assemble_graph(
      def, [&](const std::string& id) { return std::make_shared<const gp::GpEmulator>(load_gp(store, id)); },
      [&](const std::string& id) { return std::make_shared<const dlm::DlmModel>(load_dlm(store, id)); });
}

namespace {

// Column layout of the per-DLM scenario series: output first, then the
// non-constant regressors.
QuarterSeries dlm_series(const std::string& node_id, const dlm::DlmModel& model) {
  QuarterSeries s;
  s.schema = node_id;
  s.quarters = model.quarters;
  s.columns.push_back(model.output_name);
  std::vector<Eigen::Index> cols;
  for (std::size_t j = 0; j < model.regressor_names.size(); ++j) {
    if (model.regressor_names[j] == "const") continue;
    s.columns.push_back(model.regressor_names[j]);
    s.scale[model.regressor_names[j]] = model.scale_factors[j];
    cols.push_back(static_cast<Eigen::Index>(j));
  }
  const auto t = static_cast<Eigen::Index>(model.observations.size());
  s.values.resize(t, static_cast<Eigen::Index>(s.columns.size()));
  for (Eigen::Index i = 0; i < t; ++i) {
    s.values(i, 0) = model.observations[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < cols.size(); ++k) s.values(i, static_cast<Eigen::Index>(k + 1)) = model.regressors(i, cols[k]);
  }
  return s;
}

Eigen::VectorXd regression_row(const dlm::DlmModel& model, const QuarterSeries& s, Eigen::Index row) {
  Eigen::VectorXd f(static_cast<Eigen::Index>(model.regressor_names.size()));
  for (std::size_t j = 0; j < model.regressor_names.size(); ++j) {
    const auto& name = model.regressor_names[j];
    f(static_cast<Eigen::Index>(j)) = name == "const" ? 1.0 : s.values(row, s.column_index(name));
  }
  return f;
}

double param_at(const std::vector<double>& values, const Quarter& q) {
  return values.size() == 4 ? values[static_cast<std::size_t>(q.q - 1)] : values.front();
}

}  // namespace

ScenarioForecast forecast_scenario(const GraphModels& models, const Scenario& scenario, const ForecastOptions& options) {
  options.validate();
  const network::NodeGraph& graph = models.graph;
  const auto& target = graph.node(graph.target());

  // Scenario inputs: one series per DLM node, one parameter per exogenous node.
  ScenarioInputs base;
  std::vector<std::string> dlm_ids;
  for (const auto& [id, model] : models.dlms) {
    base.series.push_back(dlm_series(id, *model));
    dlm_ids.push_back(id);
  }
  for (const auto& n : graph.nodes()) {
    if (n.def.kind != NodeKind::kExogenous) continue;
    if (n.def.profile.empty()) {
      throw invalid_argument("missing_exogenous", "exogenous node '" + n.def.id + "' has no value or profile",
                             {{"node", n.def.id}});
    }
    base.params[n.def.id] = n.def.profile;
  }
  const ScenarioInputs shocked = apply_scenario(base, scenario, options.horizon);

  // Price shocks on DLM outputs become output or edge scales.
  std::map<std::string, double> output_scale;
  std::map<std::pair<std::string, std::string>, double> edge_scale;
  for (const auto& [id, model] : models.dlms) {
    if (scenario.offsets.count(model->output_name)) {
      throw invalid_argument("unsupported_shock",
                             "offsets on the modelled series '" + model->output_name + "' are not supported; use a factor",
                             {{"scenario", scenario.name}, {"series", model->output_name}});
    }
    auto f = scenario.factors.find(model->output_name);
    if (f == scenario.factors.end()) continue;
    if (options.mode == PriceShockMode::kInput) {
      output_scale[id] = f->second;
      continue;
    }
    for (const auto& child : graph.nodes()) {
      if (child.def.kind != NodeKind::kGp) continue;
      for (std::size_t i = 0; i < child.inputs.size(); ++i) {
        if (child.sources[i] && *child.sources[i] == id) edge_scale[{child.def.id, child.inputs[i]}] = f->second;
      }
    }
  }

  Quarter origin;
  if (!dlm_ids.empty()) {
    origin = Quarter::parse(models.dlms.begin()->second->quarters.back());
  } else if (options.origin) {
    origin = Quarter::parse(*options.origin);
  } else {
    throw invalid_argument("missing_origin", "graph has no dlm node; the forecast origin quarter must be given");
  }

  ScenarioForecast out;
  out.scenario = scenario;

  auto record = [&](const network::PropagationResult& r, const network::PropagationResult* plain_run,
                    const std::string& quarter, const char* kind, int step) {
    const auto& t = r.nodes.at(target.def.id);
    out.rows.push_back({scenario.name, quarter, kind, step, "composite", t.moments.scalar_mean(), t.moments.scalar_variance()});
    if (t.plain) {
      out.rows.push_back({scenario.name, quarter, kind, step, "plain", t.plain->mean, t.plain->variance});
    } else {
      const auto& p = plain_run->nodes.at(target.def.id).moments;
      out.rows.push_back({scenario.name, quarter, kind, step, "plain", p.scalar_mean(), p.scalar_variance()});
    }
    for (const auto& id : r.order) {
      if (graph.node(id).def.kind == NodeKind::kExogenous) continue;
      const auto& m = r.nodes.at(id).moments;
      out.nodes.push_back({scenario.name, quarter, kind, step, id, m.scalar_mean(), m.scalar_variance()});
    }
  };

  auto run = [&](network::StepInputs& in, const std::string& quarter, const char* kind, int step) {
    in.zero_parent_variance = options.zero_parent_variance;
    try {
      const auto r = network::propagate(graph, in);
      std::optional<network::PropagationResult> plain;
      if (target.def.kind != NodeKind::kGp) {
        network::StepInputs z = in;
        z.zero_parent_variance = true;
        plain = network::propagate(graph, z);
      }
      record(r, plain ? &*plain : nullptr, quarter, kind, step);
    } catch (Error& e) {
      throw std::move(e).with("scenario", scenario.name).with("quarter", quarter).with("step_kind", kind);
    }
  };

  if (options.include_filter && !dlm_ids.empty()) {
    const auto& first = *models.dlms.begin()->second;
    const auto t_len = static_cast<int>(first.quarters.size());
    for (int t = options.burn_in + 1; t <= t_len; ++t) {
      const std::string label = first.quarters[static_cast<std::size_t>(t - 1)];
      const Quarter q = Quarter::parse(label);
      network::StepInputs in;
      for (const auto& [id, values] : base.params) in.exogenous[id] = param_at(values, q);
      for (const auto& [id, model] : models.dlms) {
        const auto& step = models.runs.at(id).one_step[static_cast<std::size_t>(t - 1)];
        in.dlm[id] = {step, model->spec.obs_variance, model->regressors.row(t - 1).transpose()};
      }
      run(in, label, "filter", 0);
    }
  }

  std::map<std::string, std::vector<dlm::StepForecast>> ahead;
  for (std::size_t k = 0; k < dlm_ids.size(); ++k) {
    const auto& id = dlm_ids[k];
    const auto& model = *models.dlms.at(id);
    const QuarterSeries& s = shocked.series[k];
    const Eigen::Index n = static_cast<Eigen::Index>(model.observations.size());
    std::vector<Eigen::VectorXd> future;
    for (int j = 0; j < options.horizon; ++j) future.push_back(regression_row(model, s, n + j));
    ahead[id] = dlm::forecast_k(model.spec, model.state, options.horizon, future);
  }
  for (int j = 1; j <= options.horizon; ++j) {
    const Quarter q = origin.plus(j);
    network::StepInputs in;
    for (const auto& [id, values] : shocked.params) in.exogenous[id] = param_at(values, q);
    for (std::size_t k = 0; k < dlm_ids.size(); ++k) {
      const auto& id = dlm_ids[k];
      const auto& model = *models.dlms.at(id);
      const Eigen::Index n = static_cast<Eigen::Index>(model.observations.size());
      in.dlm[id] = {ahead[id][static_cast<std::size_t>(j - 1)], model.spec.obs_variance,
                    regression_row(model, shocked.series[k], n + j - 1)};
    }
    in.output_scale = output_scale;
    in.edge_scale = edge_scale;
    run(in, q.label(), "forecast", j);
  }
  return out;
}

std::vector<ScenarioForecast> forecast_scenarios(const GraphModels& models, std::span<const Scenario> scenarios,
                                                 const ForecastOptions& options) {
  std::vector<std::future<ScenarioForecast>> jobs;
  for (const auto& s : scenarios) {
    jobs.push_back(std::async(std::launch::async, [&models, &options, s] { return forecast_scenario(models, s, options); }));
  }
  std::vector<ScenarioForecast> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

void write_forecast_csv(std::ostream& out, std::span<const ScenarioForecast> results) {
  out << "scenario,quarter,step_kind,step,model,mean,variance\n" << std::setprecision(17);
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      out << row.scenario << ',' << row.quarter << ',' << row.step_kind << ',' << row.step << ',' << row.model << ','
          << row.mean << ',' << row.variance << '\n';
    }
  }
}

nlohmann::json to_json(const ForecastRow& row) {
  return {{"scenario", row.scenario}, {"quarter", row.quarter}, {"step_kind", row.step_kind}, {"step", row.step},
          {"model", row.model},       {"mean", row.mean},       {"variance", row.variance}};
}

nlohmann::json to_json(const NodeRow& row) {
  return {{"scenario", row.scenario}, {"quarter", row.quarter}, {"step_kind", row.step_kind}, {"step", row.step},
          {"node", row.node},         {"mean", row.mean},       {"variance", row.variance}};
}

}  // namespace uqnet::pipeline
