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

#include "uqnet/gp/serialize.hpp"

#include <cmath>
#include <string>

#include "uqnet/common/error.hpp"

namespace uqnet::gp {

using nlohmann::json;

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace

json to_json(const GpEmulator& em) {
  const Design& d = em.design();
  json doc;
  doc["version"] = kModelVersion;
  doc["kind"] = "gp";
  json domains = json::array();
  for (const auto& dom : d.domains) domains.push_back({dom.lower, dom.upper});
  doc["domains"] = domains;
  doc["input_names"] = d.input_names;
  json x = json::array();
  for (Eigen::Index i = 0; i < d.size(); ++i) x.push_back(to_std(d.inputs.row(i).transpose()));
  doc["X"] = x;
  doc["F"] = to_std(d.outputs);
  doc["trend"] = TrendBasis::kName;
  doc["delta"] = to_std(em.kernel().lengthscales);
  doc["tau2"] = em.kernel().nugget;
  doc["beta_hat"] = to_std(em.beta_hat());
  doc["sigma2_hat"] = em.sigma2_hat();
  doc["seed"] = em.fit_report().seed;
  doc["fit"] = {{"log_posterior", em.fit_report().log_posterior},
                {"restart_index", em.fit_report().restart_index},
                {"evaluations", em.fit_report().evaluations}};
  return doc;
}

GpEmulator emulator_from_json(const json& doc) {
  try {
    if (!doc.contains("version")) throw parse_error("corrupt_model", "model document has no version field");
    const int version = doc.at("version").get<int>();
    if (version != kModelVersion) {
      throw Error(ErrorKind::kInvalidArgument, "version_mismatch",
                  "unsupported gp model version " + std::to_string(version),
                  {{"version", std::to_string(version)}});
    }
    if (doc.at("trend").get<std::string>() != TrendBasis::kName) {
      throw invalid_argument("unsupported_trend", "only the constant+linear trend is supported");
    }
    Design d;
    for (const auto& dom : doc.at("domains")) d.domains.push_back({dom.at(0).get<double>(), dom.at(1).get<double>()});
    if (doc.contains("input_names")) d.input_names = doc.at("input_names").get<std::vector<std::string>>();
    const auto& rows = doc.at("X");
    const auto p = static_cast<Eigen::Index>(d.domains.size());
    d.inputs.resize(static_cast<Eigen::Index>(rows.size()), p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto row = rows[i].get<std::vector<double>>();
      require_same_dimension("X row", p, static_cast<long>(row.size()));
      d.inputs.row(static_cast<Eigen::Index>(i)) = to_eigen(row).transpose();
    }
    d.outputs = to_eigen(doc.at("F").get<std::vector<double>>());

    KernelSpec k{to_eigen(doc.at("delta").get<std::vector<double>>()), doc.at("tau2").get<double>()};
    FitReport report;
    report.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("fit")) {
      report.log_posterior = doc["fit"].value("log_posterior", 0.0);
      report.restart_index = doc["fit"].value("restart_index", -1);
      report.evaluations = doc["fit"].value("evaluations", 0);
    }
    GpEmulator em = GpEmulator::build(std::move(d), std::move(k), {.escalate_nugget = false}, report);

    const Eigen::VectorXd beta = to_eigen(doc.at("beta_hat").get<std::vector<double>>());
    bool consistent = beta.size() == em.beta_hat().size() && close(doc.at("sigma2_hat").get<double>(), em.sigma2_hat(), 1e-8);
    for (Eigen::Index i = 0; consistent && i < beta.size(); ++i) consistent = close(beta(i), em.beta_hat()(i), 1e-8);
    if (!consistent) {
      throw parse_error("corrupt_model", "stored beta_hat/sigma2_hat disagree with the design and hyperparameters");
    }
    return em;
  } catch (const json::exception& e) {
    throw parse_error("corrupt_model", std::string("malformed gp model document: ") + e.what());
  }
}

}  // namespace uqnet::gp
