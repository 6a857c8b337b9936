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

#include "uqnet/gp/fit.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cholesky.hpp"
#include "uqnet/common/error.hpp"
#include "uqnet/common/latin.hpp"
#include "uqnet/common/nelder_mead.hpp"

namespace uqnet::gp {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_normal_penalty(double value, double median, double log_sd) {
  const double d = (std::log(value) - std::log(median)) / log_sd;
  return -0.5 * d * d;
}

KernelSpec unpack(const Eigen::VectorXd& theta, Eigen::Index dim, const HyperparamSearchConfig& config) {
  KernelSpec k;
  k.lengthscales = theta.head(dim).array().exp();
  k.nugget = config.estimate_nugget ? std::exp(theta(dim)) : config.fixed_nugget;
  return k;
}

bool in_box(const KernelSpec& k, const HyperparamSearchConfig& config) {
  if ((k.lengthscales.array() < config.min_lengthscale).any()) return false;
  if ((k.lengthscales.array() > config.max_lengthscale).any()) return false;
  if (config.estimate_nugget && (k.nugget < config.min_nugget || k.nugget > config.max_nugget)) return false;
  return true;
}

struct RestartOutcome {
  Eigen::VectorXd theta;
  double objective = kNegInf;
  int evaluations = 0;
};

}  // namespace

double log_integrated_likelihood(const Design& design, const KernelSpec& kernel) {
  const TrendBasis trend;
  const Eigen::Index n = design.size();
  const Eigen::Index q = trend.size(design.dim());
  const Eigen::MatrixXd z = design.standardized_inputs();
  const Eigen::MatrixXd h = trend.design_matrix(z);
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!detail::factorize(correlation_matrix(kernel, z, z), kernel.nugget, llt)) return kNegInf;

  const double logdet_r = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const Eigen::MatrixXd rinv_h = llt.solve(h);
  Eigen::LLT<Eigen::MatrixXd> gram(h.transpose() * rinv_h);
  if (gram.info() != Eigen::Success) return kNegInf;
  const double logdet_k = 2.0 * gram.matrixLLT().diagonal().array().log().sum();
  const Eigen::VectorXd beta = gram.solve(rinv_h.transpose() * design.outputs);
  const Eigen::VectorXd resid = design.outputs - h * beta;
  const double quad = std::max(resid.dot(llt.solve(resid)), 1e-300);
  const double value = -0.5 * logdet_r - 0.5 * logdet_k - 0.5 * static_cast<double>(n - q) * std::log(quad);
  return std::isfinite(value) ? value : kNegInf;
}

double log_marginal_posterior(const Design& design, const KernelSpec& kernel, const HyperparamSearchConfig& config) {
  double value = log_integrated_likelihood(design, kernel);
  if (!std::isfinite(value)) return kNegInf;
  for (Eigen::Index i = 0; i < kernel.dim(); ++i) {
    value += log_normal_penalty(kernel.lengthscales(i), config.lengthscale_median, config.lengthscale_log_sd);
  }
  if (config.estimate_nugget) {
    value += log_normal_penalty(kernel.nugget, config.nugget_median, config.nugget_log_sd);
  }
  return value;
}

GpEmulator fit_gp(const Design& design, const HyperparamSearchConfig& config) {
  const Eigen::Index p = design.dim();
  design.validate(TrendBasis{}.size(p) + 3);
  if (config.restarts < 1) throw invalid_argument("invalid_config", "at least one restart is required");

  const Eigen::Index params = p + (config.estimate_nugget ? 1 : 0);
  Rng rng(config.seed);
  const Eigen::MatrixXd unit = random_latin_hypercube(config.restarts, params, rng);
  Eigen::MatrixXd starts(config.restarts, params);
  for (Eigen::Index i = 0; i < config.restarts; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) starts(i, j) = std::log(0.05) + unit(i, j) * (std::log(5.0) - std::log(0.05));
    if (config.estimate_nugget) starts(i, p) = std::log(1e-10) + unit(i, p) * (std::log(1e-3) - std::log(1e-10));
  }

  auto negative_objective = [&](const Eigen::VectorXd& theta) {
    const KernelSpec k = unpack(theta, p, config);
    if (!in_box(k, config)) return std::numeric_limits<double>::infinity();
    return -log_marginal_posterior(design, k, config);
  };

  std::vector<std::future<RestartOutcome>> jobs;
  jobs.reserve(static_cast<std::size_t>(config.restarts));
  for (Eigen::Index i = 0; i < config.restarts; ++i) {
    const Eigen::VectorXd start = starts.row(i).transpose();
    jobs.push_back(std::async(std::launch::async, [&, start] {
      optim::NelderMeadOptions options;
      options.max_evaluations = config.max_evaluations;
      options.initial_step = 0.7;
      auto first = optim::minimize(negative_objective, start, options);
      // one restart of the simplex at the optimum guards against early collapse
      options.initial_step = 0.2;
      auto second = optim::minimize(negative_objective, first.x, options);
      RestartOutcome out;
      out.theta = second.value <= first.value ? second.x : first.x;
      out.objective = -std::min(first.value, second.value);
      out.evaluations = first.evaluations + second.evaluations;
      return out;
    }));
  }

  int best = -1;
  RestartOutcome winner;
  int evaluations = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    RestartOutcome r = jobs[i].get();
    evaluations += r.evaluations;
    if (std::isfinite(r.objective) && (best < 0 || r.objective > winner.objective)) {
      best = static_cast<int>(i);
      winner = std::move(r);
    }
  }
  if (best < 0) {
    const KernelSpec last = unpack(starts.row(config.restarts - 1).transpose(), p, config);
    std::ostringstream hp;
    hp << last.lengthscales.transpose() << " tau2=" << last.nugget;
    throw numerical_failure("fit_failure", "marginal posterior was not finite at any restart",
                            {{"hyperparameters", hp.str()}});
  }

  FitReport report{winner.objective, best, evaluations, config.seed};
  return GpEmulator::build(design, unpack(winner.theta, p, config), {}, report);
}

}  // namespace uqnet::gp
