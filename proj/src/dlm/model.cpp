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

#include "uqnet/dlm/model.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "uqnet/common/error.hpp"

namespace uqnet::dlm {

using nlohmann::json;

namespace {

std::vector<Eigen::VectorXd> rows_of(const Eigen::MatrixXd& m) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index t = 0; t < m.rows(); ++t) out.emplace_back(m.row(t).transpose());
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index cols, const char* what) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = rows.at(i).get<std::vector<double>>();
    require_same_dimension(what, cols, static_cast<long>(row.size()));
    for (Eigen::Index j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)];
  }
  return m;
}

// JSON has no NaN; missing observations are written as null.
json observations_json(const std::vector<double>& y) {
  json out = json::array();
  for (double v : y) out.push_back(std::isnan(v) ? json(nullptr) : json(v));
  return out;
}

}  // namespace

std::uint64_t data_digest(std::span<const double> observations, const Eigen::MatrixXd& regressors) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (double v : observations) mix(v);
  for (Eigen::Index t = 0; t < regressors.rows(); ++t)
    for (Eigen::Index j = 0; j < regressors.cols(); ++j) mix(regressors(t, j));
  return h;
}

FilterRun DlmModel::refilter() const {
  const auto f = rows_of(regressors);
  return run_filter(spec, observations, f);
}

DlmModel fit_dlm_model(std::string schema, std::string output_name, std::vector<std::string> regressor_names,
                       std::vector<double> scale_factors, std::vector<std::string> quarters,
                       std::vector<double> observations, Eigen::MatrixXd regressors, const PrecisionPrior& prior,
                       const PrecisionFitOptions& options) {
  const auto p = static_cast<Eigen::Index>(regressor_names.size());
  require_same_dimension("regressor columns", p, regressors.cols());
  require_same_dimension("scale_factors", p, static_cast<long>(scale_factors.size()));
  require_same_dimension("observations", regressors.rows(), static_cast<long>(observations.size()));
  require_same_dimension("quarter labels", regressors.rows(), static_cast<long>(quarters.size()));

  DlmModel model;
  model.schema = std::move(schema);
  model.output_name = std::move(output_name);
  model.regressor_names = std::move(regressor_names);
  model.scale_factors = std::move(scale_factors);
  model.quarters = std::move(quarters);
  model.observations = std::move(observations);
  model.regressors = std::move(regressors);

  const auto f = rows_of(model.regressors);
  const DlmSpec tmpl = DlmSpec::diffuse(p, 1.0, 0.0, model.prior_scale);
  const PrecisionFit fit = fit_precisions(tmpl, model.observations, f, prior, options);
  model.spec = DlmSpec::diffuse(p, fit.obs_variance, fit.evolution_variance, model.prior_scale);
  model.log_posterior = fit.log_posterior;
  model.state = run_filter(model.spec, model.observations, f).states.back();
  model.data_digest = data_digest(model.observations, model.regressors);
  return model;
}

json to_json(const DlmModel& model) {
  json doc;
  doc["version"] = kModelVersion;
  doc["kind"] = "dlm";
  doc["schema"] = model.schema;
  doc["output"] = model.output_name;
  doc["regressor_names"] = model.regressor_names;
  doc["scale_factors"] = model.scale_factors;
  doc["V"] = model.spec.obs_variance;
  doc["w"] = model.spec.evolution_variance;
  doc["m"] = std::vector<double>(model.state.m.data(), model.state.m.data() + model.state.m.size());
  doc["C"] = matrix_json(model.state.C);
  doc["t"] = model.state.t;
  doc["data_digest"] = model.data_digest;
  doc["prior_scale"] = model.prior_scale;
  doc["log_posterior"] = model.log_posterior;
  doc["history"] = {{"quarters", model.quarters},
                    {"y", observations_json(model.observations)},
                    {"F", matrix_json(model.regressors)}};
  return doc;
}

DlmModel dlm_model_from_json(const json& doc) {
  try {
    if (!doc.is_object() || !doc.contains("version")) {
      throw parse_error("corrupt_model", "model document has no version field");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelVersion) {
      throw Error(ErrorKind::kInvalidArgument, "version_mismatch",
                  "unsupported dlm model version " + std::to_string(version), {{"version", std::to_string(version)}});
    }
    if (doc.value("kind", std::string{}) != "dlm") throw parse_error("corrupt_model", "document is not a dlm model");
    DlmModel model;
    model.schema = doc.value("schema", std::string{});
    model.output_name = doc.value("output", std::string{});
    model.regressor_names = doc.at("regressor_names").get<std::vector<std::string>>();
    model.scale_factors = doc.at("scale_factors").get<std::vector<double>>();
    const auto p = static_cast<Eigen::Index>(model.regressor_names.size());
    require_same_dimension("scale_factors", p, static_cast<long>(model.scale_factors.size()));
    model.prior_scale = doc.value("prior_scale", 1e6);
    model.spec = DlmSpec::diffuse(p, doc.at("V").get<double>(), doc.at("w").get<double>(), model.prior_scale);
    model.spec.validate();

    const auto m = doc.at("m").get<std::vector<double>>();
    require_same_dimension("state mean m", p, static_cast<long>(m.size()));
    model.state.m = Eigen::Map<const Eigen::VectorXd>(m.data(), p);
    const auto& c = doc.at("C");
    require_same_dimension("state covariance C", p, static_cast<long>(c.size()));
    model.state.C = matrix_from_json(c, p, "state covariance row");
    model.state.t = doc.at("t").get<int>();
    model.data_digest = doc.value("data_digest", std::uint64_t{0});
    model.log_posterior = doc.value("log_posterior", 0.0);

    if (doc.contains("history")) {
      const json& h = doc.at("history");
      model.quarters = h.at("quarters").get<std::vector<std::string>>();
      for (const auto& v : h.at("y")) model.observations.push_back(v.is_null() ? std::nan("") : v.get<double>());
      model.regressors = matrix_from_json(h.at("F"), p, "history regression row");
      require_same_dimension("history y", model.regressors.rows(), static_cast<long>(model.observations.size()));
      require_same_dimension("history quarters", model.regressors.rows(), static_cast<long>(model.quarters.size()));
      if (data_digest(model.observations, model.regressors) != model.data_digest) {
        throw parse_error("corrupt_model", "dlm history does not match its data digest");
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw parse_error("corrupt_model", std::string("malformed dlm model document: ") + e.what());
  }
}

}  // namespace uqnet::dlm
