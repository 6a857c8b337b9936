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

#include "uqnet/service/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "uqnet/gp/serialize.hpp"
#include "uqnet/pipeline/case_study.hpp"
#include "uqnet/service/core.hpp"
#include "uqnet/service/http.hpp"

namespace uqnet::service {

using nlohmann::json;

namespace {

std::string default_store() {
  const char* env = std::getenv("UQNET_STORE_DIR");
  return env && *env ? env : "uqnet-store";
}

std::string default_bind() {
  const char* env = std::getenv("UQNET_BIND_ADDR");
  return env && *env ? env : "127.0.0.1:8080";
}

// Writes to `path`, or to `fallback` when the path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream file(p);
  if (!file) throw Error(ErrorKind::kInternal, "write_failed", "cannot write '" + path + "'", {{"path", path}});
  write(file);
  if (!file) throw Error(ErrorKind::kInternal, "write_failed", "failed writing '" + path + "'", {{"path", path}});
}

std::string csv_number(const json& v) {
  if (v.is_null()) return "";
  std::ostringstream s;
  s << std::setprecision(17) << v.get<double>();
  return s.str();
}

void write_rows_csv(std::ostream& out, const json& response) {
  out << "scenario,quarter,step_kind,step,model,mean,variance\n";
  const std::string scenario = response.at("scenario").at("name").get<std::string>();
  for (const auto& r : response.at("rows")) {
    out << scenario << ',' << r.at("quarter").get<std::string>() << ',' << r.at("step_kind").get<std::string>() << ','
        << r.at("step").get<int>() << ',' << r.at("model").get<std::string>() << ',' << csv_number(r.at("mean")) << ','
        << csv_number(r.at("variance")) << '\n';
  }
}

void write_diagnostics_csv(std::ostream& out, const json& d) {
  if (d.at("kind") == "gp") {
    out << "index,point,observed,mean,sd,within_two_sd\n";
    for (const auto& r : d.at("rows")) {
      std::string point;
      for (const auto& x : r.at("point")) point += (point.empty() ? "" : ";") + csv_number(x);
      out << r.at("index").get<std::size_t>() << ',' << point << ',' << csv_number(r.at("observed")) << ','
          << csv_number(r.at("mean")) << ',' << csv_number(r.at("sd")) << ','
          << (r.at("within_two_sd").get<bool>() ? 1 : 0) << '\n';
    }
  } else {
    out << "quarter,observed,mean,sd,within_two_sd\n";
    for (const auto& r : d.at("rows")) {
      out << r.at("quarter").get<std::string>() << ',' << csv_number(r.at("observed")) << ',' << csv_number(r.at("mean"))
          << ',' << csv_number(r.at("sd")) << ',' << (r.at("within_two_sd").get<bool>() ? 1 : 0) << '\n';
    }
  }
}

struct Options {
  std::string config;
  std::string store = default_store();
  std::string model_id;
  std::string graph_id;
  std::string scenario = "scenario1";
  std::string out;
  std::string mode = "output";
  std::string simulator = "heat";
  std::string bind = default_bind();
  std::optional<int> horizon;
  std::optional<std::uint64_t> seed;
  long runs = 100;
  int fit_timeout = 300;
  bool with_filter = false;
  bool zero_parent_variance = false;
};

pipeline::CaseStudyConfig require_config(const Options& o) {
  if (o.config.empty()) throw invalid_argument("missing_config", "--config is required for this command");
  return pipeline::CaseStudyConfig::load(o.config);
}

// Ensures the config's models and graph are in the store; returns the graph id.
std::string prepare_graph(const pipeline::CaseStudyConfig& config, Core& core) {
  pipeline::ensure_case_study_models(config, core.store());
  network::GraphDef def = config.graph;
  if (def.id.empty()) def.id = config.id;
  core.create_graph(network::to_json(def), true);
  return def.id;
}

json forecast_request(const Options& o, const pipeline::CaseStudyConfig& config) {
  json body = {{"horizon", o.horizon.value_or(config.forecast.horizon)},
               {"mode", o.mode},
               {"include_filter", o.with_filter},
               {"burn_in", config.forecast.burn_in},
               {"zero_parent_variance", o.zero_parent_variance}};
  return body;
}

void check_horizon(const Options& o) {
  if (o.horizon && *o.horizon < 1) {
    throw invalid_argument("invalid_horizon", "horizon must be ≥ 1", {{"horizon", std::to_string(*o.horizon)}});
  }
}

json fit_gp_request(const pipeline::CaseStudyConfig& config, const std::string& id, const Options& o) {
  const auto it = config.emulators.find(id);
  if (it == config.emulators.end()) {
    throw invalid_argument("unknown_model", "config defines no emulator '" + id + "'", {{"id", id}});
  }
  const auto& ec = it->second;
  return {{"id", id},
          {"simulator", ec.simulator == simulators::SimulatorKind::kHeatDemand ? "heat" : "dispatch"},
          {"runs", ec.runs},
          {"train", ec.train},
          {"seed", ec.seed},
          {"search", {{"restarts", config.search.restarts}, {"seed", o.seed.value_or(config.search.seed)},
                      {"max_evaluations", config.search.max_evaluations},
                      {"estimate_nugget", config.search.estimate_nugget},
                      {"fixed_nugget", config.search.fixed_nugget}}},
          {"overwrite", true}};
}

json fit_dlm_request(const pipeline::CaseStudyConfig& config, const std::string& id) {
  const auto it = config.dlms.find(id);
  if (it == config.dlms.end()) {
    throw invalid_argument("unknown_model", "config defines no dlm '" + id + "'", {{"id", id}});
  }
  const auto& dc = it->second;
  const auto path = config.data.find(dc.data);
  if (path == config.data.end()) {
    throw invalid_argument("invalid_config", "dlm '" + id + "' refers to unknown data '" + dc.data + "'", {{"id", id}});
  }
  std::ifstream file(path->second);
  if (!file) {
    throw Error(ErrorKind::kNotFound, "file_not_found", "cannot open '" + path->second.string() + "'",
                {{"path", path->second.string()}});
  }
  std::ostringstream csv;
  csv << file.rdbuf();
  return {{"id", id},
          {"schema", dc.schema},
          {"csv", csv.str()},
          {"output", dc.output},
          {"regressors", dc.regressors},
          {"fix_evolution_zero", dc.fix_evolution_zero},
          {"overwrite", true}};
}

void write_case_study(const std::string& dir, const pipeline::CaseStudyResult& result, std::ostream& out) {
  emit(dir.empty() ? "" : dir + "/forecasts.csv", out,
       [&](std::ostream& s) { pipeline::write_forecast_csv(s, result.forecasts); });
  emit(dir.empty() ? "" : dir + "/holdout.csv", out, [&](std::ostream& s) {
    s << "emulator,index,observed,mean,sd,within_two_sd\n" << std::setprecision(17);
    for (const auto& [id, records] : result.holdout) {
      for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        s << id << ',' << i << ',' << r.observed << ',' << r.mean << ',' << r.sd << ',' << (r.within_two_sd ? 1 : 0)
          << '\n';
      }
    }
  });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"uqnet: emulator networks for energy cost forecasting"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--store", o.store, "model store directory (env UQNET_STORE_DIR)");

  auto* fit_gp = app.add_subcommand("fit-gp", "fit a GP emulator defined in the config");
  fit_gp->add_option("--config", o.config)->required();
  fit_gp->add_option("--model-id", o.model_id)->required();
  fit_gp->add_option("--seed", o.seed, "hyperparameter search seed");
  fit_gp->add_option("--out", o.out, "write the fitted model JSON here");

  auto* fit_dlm = app.add_subcommand("fit-dlm", "fit a DLM defined in the config");
  fit_dlm->add_option("--config", o.config)->required();
  fit_dlm->add_option("--model-id", o.model_id)->required();
  fit_dlm->add_option("--out", o.out, "write the fitted model JSON here");

  auto* build = app.add_subcommand("build-graph", "fit missing models and store the config's graph");
  build->add_option("--config", o.config)->required();
  build->add_option("--out", o.out, "write the graph JSON here");

  auto* forecast = app.add_subcommand("forecast", "baseline forecast of the graph target");
  forecast->add_option("--config", o.config);
  forecast->add_option("--horizon", o.horizon);
  forecast->add_option("--mode", o.mode, "price shock mode: output or input");
  forecast->add_flag("--with-filter", o.with_filter, "include one-step rows over the history");
  forecast->add_flag("--zero-parent-variance", o.zero_parent_variance);
  forecast->add_option("--out", o.out, "CSV output path");

  auto* scenario = app.add_subcommand("scenario", "scenario commands");
  scenario->require_subcommand(1);
  auto* scenario_run = scenario->add_subcommand("run", "forecast under a named scenario");
  scenario_run->add_option("--config", o.config);
  scenario_run->add_option("--scenario", o.scenario)->required();
  scenario_run->add_option("--horizon", o.horizon);
  scenario_run->add_option("--mode", o.mode, "price shock mode: output or input");
  scenario_run->add_flag("--with-filter", o.with_filter, "include one-step rows over the history");
  scenario_run->add_flag("--zero-parent-variance", o.zero_parent_variance);
  scenario_run->add_option("--out", o.out, "CSV output path");

  auto* diagnostics = app.add_subcommand("diagnostics", "leave-one-out (GP) or one-step (DLM) table");
  diagnostics->add_option("--config", o.config, "fit missing models from this config first");
  diagnostics->add_option("--model-id", o.model_id)->required();
  diagnostics->add_option("--out", o.out, "CSV output path");

  auto* simulate = app.add_subcommand("simulate-ensemble", "run a simulator on a maximin Latin hypercube");
  simulate->add_option("--simulator", o.simulator, "heat or dispatch");
  simulate->add_option("--runs", o.runs)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed);
  simulate->add_option("--out", o.out, "CSV output path");

  auto* case_study = app.add_subcommand("case-study", "fit, validate and forecast every scenario in the config");
  case_study->add_option("--config", o.config)->required();
  case_study->add_option("--out", o.out, "output directory (forecasts.csv, holdout.csv)");

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--bind", o.bind, "host:port (env UQNET_BIND_ADDR)");
  serve->add_option("--fit-timeout", o.fit_timeout, "seconds")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    std::optional<Core> opened;
    auto core = [&]() -> Core& {
      if (!opened) opened.emplace(o.store);
      return *opened;
    };
    if (*fit_gp) {
      const auto config = require_config(o);
      const json r = core().fit_gp(fit_gp_request(config, o.model_id, o));
      emit(o.out, out, [&](std::ostream& s) { s << r.at("model").dump(2) << '\n'; });
    } else if (*fit_dlm) {
      const auto config = require_config(o);
      const json r = core().fit_dlm(fit_dlm_request(config, o.model_id));
      emit(o.out, out, [&](std::ostream& s) { s << r.at("model").dump(2) << '\n'; });
    } else if (*build) {
      const auto config = require_config(o);
      const std::string id = prepare_graph(config, core());
      const json def = core().store().get(pipeline::ModelStore::Collection::kGraphs, id);
      emit(o.out, out, [&](std::ostream& s) { s << def.dump(2) << '\n'; });
    } else if (*forecast || *scenario_run) {
      check_horizon(o);
      pipeline::parse_shock_mode(o.mode);
      const auto config = require_config(o);
      json body = forecast_request(o, config);
      if (*scenario_run) body["scenario"] = pipeline::to_json(config.scenario(o.scenario));
      const std::string id = prepare_graph(config, core());
      const json r = core().forecast(id, body);
      emit(o.out, out, [&](std::ostream& s) { write_rows_csv(s, r); });
    } else if (*diagnostics) {
      if (!o.config.empty()) pipeline::ensure_case_study_models(require_config(o), core().store());
      const json d = core().diagnostics(o.model_id);
      emit(o.out, out, [&](std::ostream& s) { write_diagnostics_csv(s, d); });
    } else if (*simulate) {
      const auto kind = simulators::parse_simulator(o.simulator);
      const gp::Design d = simulators::run_ensemble(kind, o.runs, o.seed.value_or(1));
      emit(o.out, out, [&](std::ostream& s) {
        simulators::write_ensemble_csv(s, d, kind == simulators::SimulatorKind::kHeatDemand ? "demand" : "cost");
      });
    } else if (*case_study) {
      const auto config = require_config(o);
      const auto models = pipeline::ensure_case_study_models(config, core().store());
      const auto result = pipeline::run_case_study(config, models);
      write_case_study(o.out, result, out);
      for (const auto& [id, records] : result.holdout) {
        err << id << " holdout coverage " << gp::coverage(records) << " over " << records.size() << " runs\n";
      }
    } else if (*serve) {
      HttpService service(core(), {std::chrono::seconds(o.fit_timeout)});
      const int port = service.bind(BindAddress::parse(o.bind));
      err << "uqnet: serving on port " << port << " with store " << o.store << std::endl;
      service.serve();
    }
    return 0;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what();
    for (const auto& [k, v] : e.context()) err << " " << k << "=" << v;
    err << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace uqnet::service
