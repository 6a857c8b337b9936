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

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "uqnet/dlm/dlm.hpp"
#include "uqnet/gp/fit.hpp"
#include "uqnet/pipeline/case_study.hpp"
#include "uqnet/pipeline/scenario.hpp"
#include "uqnet/pipeline/series.hpp"
#include "uqnet/pipeline/store.hpp"

using namespace uqnet;
using namespace uqnet::pipeline;

namespace {

const std::string kGasHeader = "date,gas_price,prod,imports,storage,coal\n";

std::string gas_rows(int first_year, int quarters) {
  std::ostringstream os;
  for (int i = 0; i < quarters; ++i) {
    os << Quarter{first_year + i / 4, i % 4 + 1}.label() << "," << 2.0 + 0.1 * i << "," << 1000000 + 1000 * i << ","
       << 900000 << "," << 1200000 << "," << 0.9 << "\n";
  }
  return os.str();
}

QuarterSeries ingest_text(const std::string& text, const std::string& schema = "gas-factors") {
  std::istringstream in(text);
  return ingest(in, schema);
}

std::map<std::string, std::string> context_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.context();
  }
  return {};
}

CaseStudyConfig shipped_case_study() {
  return CaseStudyConfig::load(testing::source_dir() / "config" / "case_study.json");
}

gp::GpEmulator small_gp() {
  gp::Design d;
  d.domains = {{0.0, 1.0}, {0.0, 2.0}};
  d.inputs.resize(12, 2);
  d.outputs.resize(12);
  for (int i = 0; i < 12; ++i) {
    d.inputs(i, 0) = (i % 4) / 3.0;
    d.inputs(i, 1) = (i / 4) * 0.9 + 0.05 * (i % 3);
    d.outputs(i) = std::sin(3 * d.inputs(i, 0)) + d.inputs(i, 1);
  }
  gp::HyperparamSearchConfig cfg;
  cfg.restarts = 2;
  return gp::fit_gp(d, cfg);
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("quarter labels parse and step") {
  const Quarter q = Quarter::parse("2021-Q4");
  CHECK(q.year == 2021);
  CHECK(q.q == 4);
  CHECK(q.plus(1).label() == "2022-Q1");
  CHECK(q.plus(-4).label() == "2020-Q4");
  CHECK(testing::error_code([] { Quarter::parse("2021-Q5"); }) == "bad_quarter");
  CHECK(testing::error_code([] { Quarter::parse("2021Q1"); }) == "bad_quarter");
}

TEST_CASE("shipped fixtures ingest to 40 quarters") {
  for (const auto& [file, schema] : std::map<std::string, std::string>{{"gas_factors.csv", "gas-factors"},
                                                                      {"elec_factors.csv", "elec-factors"}}) {
    const QuarterSeries s = ingest_file(testing::source_dir() / "data" / file, schema);
    CHECK(s.size() == 40);
    CHECK(s.quarters.front() == "2012-Q1");
    CHECK(s.quarters.back() == "2021-Q4");
    CHECK(s.columns == series_schema(schema).columns);
  }
}

TEST_CASE("volume columns are scaled on ingest") {
  const QuarterSeries s = ingest_text(kGasHeader + gas_rows(2012, 4));
  CHECK(s.column("prod")(0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(s.column("storage")(0) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(s.scale_of("prod") == 1e-5);
  CHECK(s.scale_of("gas_price") == 1.0);
}

TEST_CASE("ingest is lossless modulo scaling") {
  const QuarterSeries s = ingest_file(testing::source_dir() / "data" / "gas_factors.csv", "gas-factors");
  std::ifstream in(testing::source_dir() / "data" / "gas_factors.csv");
  std::string line;
  std::getline(in, line);
  const Eigen::MatrixXd raw = s.raw_values();
  for (Eigen::Index r = 0; std::getline(in, line); ++r) {
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    for (Eigen::Index c = 0; std::getline(cells, cell, ','); ++c) {
      const double v = std::stod(cell);
      CHECK(std::abs(raw(r, c) - v) <= 1e-12 * std::max(1.0, std::abs(v)));
    }
  }

  std::stringstream out;
  write_series_csv(out, s);
  const QuarterSeries back = ingest(out, "gas-factors");
  CHECK(((back.values - s.values).array().abs() <= 1e-12 * s.values.array().abs().max(1.0)).all());
}

TEST_CASE("ingest accepts any column order and ignores extra columns") {
  const QuarterSeries s = ingest_text("coal,date,extra,storage,imports,prod,gas_price\n0.9,2012-Q1,7,1200000,900000,1000000,2.5\n");
  CHECK(s.size() == 1);
  CHECK(s.column("gas_price")(0) == 2.5);
  CHECK(s.column("prod")(0) == doctest::Approx(10.0));
}

TEST_CASE("duplicate quarters are rejected by label") {
  const std::string text = kGasHeader + gas_rows(2012, 3) + "2012-Q3,2,1,1,1,1\n";
  CHECK(testing::error_code([&] { ingest_text(text); }) == "duplicate_quarter");
  CHECK(context_of([&] { ingest_text(text); }).at("label") == "2012-Q3");
}

TEST_CASE("quarter gaps and disorder are rejected") {
  CHECK(testing::error_code([] { ingest_text(kGasHeader + "2012-Q1,2,1,1,1,1\n2012-Q3,2,1,1,1,1\n"); }) == "quarter_gap");
  CHECK(testing::error_code([] { ingest_text(kGasHeader + "2012-Q2,2,1,1,1,1\n2012-Q1,2,1,1,1,1\n"); }) ==
        "quarter_order");
}

TEST_CASE("missing columns and bad numbers carry their location") {
  CHECK(testing::error_code([] { ingest_text("date,gas_price,prod,imports,coal\n2012-Q1,2,1,1,1\n"); }) ==
        "missing_column");
  CHECK(context_of([] { ingest_text("date,gas_price,prod,imports,coal\n2012-Q1,2,1,1,1\n"); }).at("column") ==
        "storage");

  const std::string text = kGasHeader + "2012-Q1,2,1,1,1,1\n2012-Q2,2,abc,1,1,1\n";
  CHECK(testing::error_code([&] { ingest_text(text); }) == "bad_number");
  const auto ctx = context_of([&] { ingest_text(text); });
  CHECK(ctx.at("row") == "3");
  CHECK(ctx.at("column") == "prod");

  CHECK(testing::error_code([] { ingest_text(kGasHeader + "2012-Q1,2,1\n"); }) == "missing_value");
  CHECK(testing::error_code([] { ingest_text(""); }) == "empty_csv");
  CHECK(testing::error_code([] { ingest_text(kGasHeader); }) == "empty_csv");
  CHECK(testing::error_code([] { ingest_text(kGasHeader, "wind-factors"); }) == "unknown_schema");
  CHECK(testing::error_code([] { ingest_file("/nonexistent/gas.csv", "gas-factors"); }) == "file_not_found");
}

TEST_CASE("preset scenarios carry the stated shocks") {
  CHECK(preset_scenario("scenario1").is_identity());
  const Scenario s2 = preset_scenario("scenario2");
  CHECK(s2.factors.at("gas_price") == 1.25);
  CHECK(s2.factors.at("elec_price") == 1.25);
  const Scenario s3 = preset_scenario("scenario3");
  CHECK(s3.factors.at("elec_price") == 1.30);
  CHECK(s3.factors.at("gas_price") == 1.65);
  CHECK(s3.factors.at("imports") == 1.40);
  CHECK(s3.factors.at("storage") == 0.50);
  CHECK(testing::error_code([] { preset_scenario("scenario9"); }) == "unknown_scenario");
}

TEST_CASE("scenarios act on the horizon only") {
  ScenarioInputs in;
  in.series.push_back(ingest_text(kGasHeader + gas_rows(2020, 3) + "2020-Q4,3.0,1000000,900000,1200000,0.9\n"));
  in.series.push_back(ingest_text("date,elec_price,gas_price,ets,offshore_wind\n2020-Q4,15.0,3.0,20,8\n",
                                  "elec-factors"));
  in.params["heat_pump_cop"] = {3.0};

  const ScenarioInputs s2 = apply_scenario(in, preset_scenario("scenario2"), 4);
  const QuarterSeries& g2 = s2.series[0];
  REQUIRE(g2.size() == 8);
  CHECK(g2.quarters[4] == "2021-Q1");
  CHECK(g2.quarters[7] == "2021-Q4");
  for (Eigen::Index t = 0; t < 4; ++t) CHECK(g2.values.row(t) == in.series[0].values.row(t));
  for (Eigen::Index t = 4; t < 8; ++t) CHECK(g2.column("gas_price")(t) == doctest::Approx(3.75).epsilon(1e-15));
  CHECK(s2.series[1].column("elec_price")(1) == doctest::Approx(18.75).epsilon(1e-15));
  CHECK(s2.series[1].column("gas_price")(1) == doctest::Approx(3.75).epsilon(1e-15));
  CHECK(s2.params.at("heat_pump_cop") == std::vector<double>{3.0});

  const ScenarioInputs s3 = apply_scenario(in, preset_scenario("scenario3"), 2);
  CHECK(s3.series[0].column("storage")(3) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(s3.series[0].column("storage")(4) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(s3.series[0].column("imports")(5) == doctest::Approx(9.0 * 1.4).epsilon(1e-15));
}

TEST_CASE("the identity scenario is bitwise identity") {
  ScenarioInputs in;
  in.series.push_back(ingest_file(testing::source_dir() / "data" / "gas_factors.csv", "gas-factors"));
  in.params["boiler_efficiency"] = {0.9};
  const ScenarioInputs carried = apply_scenario(in, Scenario{}, 4);
  const ScenarioInputs s1 = apply_scenario(in, preset_scenario("scenario1"), 4);
  CHECK((s1.series[0].values.array() == carried.series[0].values.array()).all());
  CHECK(s1.params == in.params);
  for (Eigen::Index t = 40; t < 44; ++t) CHECK(s1.series[0].values.row(t) == in.series[0].values.row(39));
}

TEST_CASE("scenario composition") {
  ScenarioInputs in;
  in.series.push_back(ingest_text(kGasHeader + gas_rows(2020, 4)));
  in.params["heat_pump_cop"] = {3.0, 3.1, 3.2, 3.3};
  const Scenario a{"a", {{"gas_price", 1.2}}, {{"storage", 100000.0}}, {}};
  const Scenario b{"b", {{"gas_price", 1.5}, {"storage", 0.5}}, {{"gas_price", 0.25}}, {{"heat_pump_cop", 4.0}}};
  const Scenario id = preset_scenario("scenario1");

  CHECK(to_json(compose(id, a)) == to_json(a));
  CHECK(to_json(compose(a, id)) == to_json(a));

  const ScenarioInputs ab = apply_scenario(in, compose(a, b), 3);
  const ScenarioInputs base = apply_scenario(in, Scenario{}, 3);
  for (Eigen::Index t = 4; t < 7; ++t) {
    const double gas = base.series[0].column("gas_price")(t);
    const double storage = base.series[0].column("storage")(t);
    CHECK(ab.series[0].column("gas_price")(t) == doctest::Approx(gas * 1.2 * 1.5 + 0.25).epsilon(1e-14));
    CHECK(ab.series[0].column("storage")(t) == doctest::Approx((storage + 1.0) * 0.5).epsilon(1e-14));
  }
  CHECK(ab.params.at("heat_pump_cop") == std::vector<double>(4, 4.0));

  const Scenario x{"x", {{"gas_price", 1.1}, {"imports", 0.7}}, {}, {}};
  const Scenario y{"y", {{"gas_price", 1.3}, {"storage", 2.0}}, {}, {}};
  const auto xy = apply_scenario(in, compose(x, y), 2).series[0].values;
  const auto yx = apply_scenario(in, compose(y, x), 2).series[0].values;
  CHECK(((xy - yx).array().abs() <= 1e-14 * xy.array().abs()).all());
}

TEST_CASE("scenarios naming unknown series or parameters are rejected") {
  ScenarioInputs in;
  in.series.push_back(ingest_text(kGasHeader + gas_rows(2020, 4)));
  const Scenario bad{"bad", {{"wind", 1.1}}, {}, {}};
  CHECK(testing::error_code([&] { apply_scenario(in, bad, 2); }) == "unknown_series");
  CHECK(context_of([&] { apply_scenario(in, bad, 2); }).at("series") == "wind");
  const Scenario over{"over", {}, {}, {{"cop", 4.0}}};
  CHECK(testing::error_code([&] { apply_scenario(in, over, 2); }) == "unknown_parameter");
  const Scenario neg{"neg", {{"gas_price", -1.0}}, {}, {}};
  CHECK(testing::error_code([&] { apply_scenario(in, neg, 2); }) == "invalid_scenario");
  CHECK(testing::error_code([&] { apply_scenario(in, Scenario{}, -1); }) == "invalid_horizon");
}

TEST_CASE("scenario JSON round trip") {
  const Scenario s{"custom", {{"gas_price", 1.1}}, {{"storage", -2.0}}, {{"heat_pump_cop", 3.5}}};
  CHECK(to_json(scenario_from_json(to_json(s))) == to_json(s));
  CHECK(to_json(scenario_from_json(nlohmann::json("scenario2"))) == to_json(preset_scenario("scenario2")));
  CHECK(testing::error_code([] { scenario_from_json(nlohmann::json(3)); }) == "invalid_scenario");
}

TEST_CASE("model store basics") {
  testing::TempDir dir("store");
  ModelStore store(dir.path());
  const nlohmann::json doc = {{"kind", "gp"}, {"x", 1}};
  store.put(ModelStore::Collection::kModels, "m1", doc);
  CHECK(store.contains(ModelStore::Collection::kModels, "m1"));
  CHECK(store.get(ModelStore::Collection::kModels, "m1") == doc);
  CHECK(testing::error_code([&] { store.put(ModelStore::Collection::kModels, "m1", doc); }) == "duplicate_id");
  store.put(ModelStore::Collection::kModels, "m1", {{"kind", "gp"}, {"x", 2}}, true);
  CHECK(store.get(ModelStore::Collection::kModels, "m1").at("x") == 2);
  CHECK(testing::error_code([&] { store.get(ModelStore::Collection::kModels, "m2"); }) == "model_not_found");
  CHECK_FALSE(store.contains(ModelStore::Collection::kGraphs, "m1"));
  CHECK(store.list(ModelStore::Collection::kModels) == std::vector<std::string>{"m1"});
  store.remove(ModelStore::Collection::kModels, "m1");
  CHECK_FALSE(store.contains(ModelStore::Collection::kModels, "m1"));

  CHECK(testing::error_code([] { validate_id("../etc"); }) == "invalid_id");
  CHECK(testing::error_code([] { validate_id(".hidden"); }) == "invalid_id");
  CHECK(testing::error_code([] { validate_id(std::string(65, 'a')); }) == "invalid_id");
  CHECK(testing::error_code([] { validate_id("ok-id_1.v2"); }).empty());
}

TEST_CASE("truncated documents are corrupt, never partial models") {
  testing::TempDir dir("corrupt");
  ModelStore store(dir.path());
  save_gp(store, "g", small_gp());
  const auto path = store.path_of(ModelStore::Collection::kModels, "g");
  std::string text;
  {
    std::ifstream in(path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  {
    std::ofstream out(path, std::ios::trunc);
    out << text.substr(0, text.size() / 2);
  }
  CHECK(testing::error_code([&] { load_gp(store, "g"); }) == "corrupt_model");
  CHECK(testing::error_code([&] { model_kind(store, "g"); }) == "corrupt_model");
}

TEST_CASE("gp persistence reproduces predictions") {
  testing::TempDir dir("gp-persist");
  ModelStore store(dir.path());
  const gp::GpEmulator em = small_gp();
  save_gp(store, "g", em);
  CHECK(model_kind(store, "g") == "gp");
  const gp::GpEmulator back = load_gp(store, "g");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector2d x(u(rng), 2 * u(rng));
    const auto a = em.predict(x), b = back.predict(x);
    CHECK(std::abs(a.mean - b.mean) <= 1e-12 * std::max(1.0, std::abs(a.mean)));
    CHECK(std::abs(a.variance - b.variance) <= 1e-12 * std::max(1.0, a.variance));
  }
  CHECK(testing::error_code([&] { load_dlm(store, "g"); }) == "wrong_model_kind");
}

TEST_CASE("dlm persistence reproduces the filter and forecasts") {
  testing::TempDir dir("dlm-persist");
  ModelStore store(dir.path());
  const CaseStudyConfig cfg = CaseStudyConfig::load(testing::source_dir() / "config" / "case_study.json");
  const DlmConfig& dc = cfg.dlms.at("gas-dlm");
  const dlm::DlmModel model = fit_dlm(dc, ingest_file(cfg.data.at(dc.data), dc.schema));
  save_dlm(store, "d", model);
  CHECK(model_kind(store, "d") == "dlm");
  const dlm::DlmModel back = load_dlm(store, "d");

  CHECK(back.spec.obs_variance == model.spec.obs_variance);
  CHECK(back.spec.evolution_variance == model.spec.evolution_variance);
  CHECK(((back.state.m - model.state.m).array().abs() <= 1e-12 * model.state.m.array().abs().max(1.0)).all());
  CHECK(((back.state.C - model.state.C).array().abs() <= 1e-12 * model.state.C.array().abs().max(1.0)).all());

  const std::vector<Eigen::VectorXd> future(3, model.regressors.row(model.regressors.rows() - 1).transpose());
  const auto fa = dlm::forecast_k(model.spec, model.state, 3, future);
  const auto fb = dlm::forecast_k(back.spec, back.state, 3, future);
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(fa[k].f - fb[k].f) <= 1e-12 * std::max(1.0, std::abs(fa[k].f)));
    CHECK(std::abs(fa[k].Q - fb[k].Q) <= 1e-12 * std::max(1.0, fa[k].Q));
  }
  CHECK(testing::error_code([&] { load_gp(store, "d"); }) == "wrong_model_kind");
}

TEST_CASE("case study properties") {
  const CaseStudyConfig cfg = shipped_case_study();
  const CaseStudyResult res = run_case_study(cfg);
  REQUIRE(res.forecasts.size() == 3);

  std::map<std::string, std::map<std::string, double>> mean, var;
  for (const auto& f : res.forecasts) {
    for (const auto& r : f.rows) {
      const std::string key = r.step_kind + "/" + r.quarter + "/" + r.model;
      mean[f.scenario.name][key] = r.mean;
      var[f.scenario.name][key] = r.variance;
      CHECK(r.variance >= 0.0);
      CHECK(std::isfinite(r.mean));
    }
  }

  int one_step = 0, forecasts = 0;
  for (const auto& r : res.forecasts[0].rows) {
    if (r.model != "composite") continue;
    if (r.step_kind == "filter") {
      ++one_step;
      continue;
    }
    ++forecasts;
    const std::string key = r.step_kind + "/" + r.quarter;
    CHECK(r.variance >= var["scenario1"].at(key + "/plain"));
    CHECK(mean["scenario2"].at(key + "/composite") >= mean["scenario1"].at(key + "/composite"));
  }
  CHECK(one_step == 40 - cfg.forecast.burn_in);
  CHECK(forecasts == cfg.forecast.horizon);

  ForecastOptions zero = cfg.forecast;
  zero.zero_parent_variance = true;
  zero.include_filter = true;
  const GraphModels g = build_case_study_graph(cfg, res.models);
  for (const auto& s : cfg.scenarios) {
    const ScenarioForecast z = forecast_scenario(g, s, zero);
    std::map<std::string, std::pair<double, double>> plain;
    for (const auto& r : z.rows)
      if (r.model == "plain") plain[r.step_kind + r.quarter] = {r.mean, r.variance};
    for (const auto& r : z.rows) {
      if (r.model != "composite") continue;
      const auto& p = plain.at(r.step_kind + r.quarter);
      CHECK(std::abs(r.mean - p.first) <= 1e-10 * std::max(1.0, std::abs(p.first)));
      CHECK(std::abs(r.variance - p.second) <= 1e-10 * std::max(1.0, p.second));
    }
  }
}

TEST_CASE("case study is deterministic") {
  const CaseStudyConfig cfg = shipped_case_study();
  const CaseStudyResult a = run_case_study(cfg);
  const CaseStudyResult b = run_case_study(cfg);
  std::stringstream sa, sb;
  write_forecast_csv(sa, a.forecasts);
  write_forecast_csv(sb, b.forecasts);
  CHECK(sa.str() == sb.str());
}

}  // TEST_SUITE
