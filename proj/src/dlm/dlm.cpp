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

#include "uqnet/dlm/dlm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uqnet/common/error.hpp"
#include "uqnet/common/nelder_mead.hpp"

namespace uqnet::dlm {

DlmSpec DlmSpec::diffuse(Eigen::Index state_dim, double obs_variance, double evolution_variance, double prior_scale) {
  DlmSpec spec;
  spec.evolution = Eigen::MatrixXd::Identity(state_dim, state_dim);
  spec.obs_variance = obs_variance;
  spec.evolution_variance = evolution_variance;
  spec.prior_mean = Eigen::VectorXd::Zero(state_dim);
  spec.prior_cov = prior_scale * Eigen::MatrixXd::Identity(state_dim, state_dim);
  return spec;
}

Eigen::MatrixXd DlmSpec::evolution_cov() const {
  return evolution_variance * Eigen::MatrixXd::Identity(state_dim(), state_dim());
}

void DlmSpec::validate() const {
  const Eigen::Index p = state_dim();
  if (p < 1 || evolution.cols() != p) throw invalid_argument("invalid_dlm", "evolution matrix must be square and non-empty");
  require_same_dimension("prior mean", p, prior_mean.size());
  require_same_dimension("prior covariance rows", p, prior_cov.rows());
  require_same_dimension("prior covariance cols", p, prior_cov.cols());
  if (!(obs_variance > 0.0) || !std::isfinite(obs_variance)) {
    throw invalid_argument("invalid_dlm", "observation variance V must be positive");
  }
  if (!(evolution_variance >= 0.0) || !std::isfinite(evolution_variance)) {
    throw invalid_argument("invalid_dlm", "evolution variance w must be nonnegative");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (prior_cov + prior_cov.transpose()));
  if (eig.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, prior_cov.trace())) {
    throw invalid_argument("invalid_dlm", "prior covariance C(0) is not positive semidefinite");
  }
}

FilterState initial_state(const DlmSpec& spec) {
  spec.validate();
  FilterState s;
  s.t = 0;
  s.m = spec.prior_mean;
  s.C = spec.prior_cov;
  return s;
}

StepForecast one_step_forecast(const DlmSpec& spec, const FilterState& state, const Eigen::VectorXd& regressors) {
  require_same_dimension("regression vector", spec.state_dim(), regressors.size());
  const Eigen::MatrixXd& g = spec.evolution;
  StepForecast out;
  out.a = g * state.m;
  out.R = g * state.C * g.transpose() + spec.evolution_cov();
  out.R = (0.5 * (out.R + out.R.transpose())).eval();
  out.f = regressors.dot(out.a);
  out.Q = regressors.dot(out.R * regressors) + spec.obs_variance;
  return out;
}

FilterState filter_step(const DlmSpec& spec, const FilterState& state, double y, const Eigen::VectorXd& regressors) {
  const StepForecast fc = one_step_forecast(spec, state, regressors);
  if (!(fc.Q > 0.0) || !std::isfinite(fc.Q)) {
    throw numerical_failure("nonpositive_forecast_variance", "one-step forecast variance Q(t) is not positive",
                            {{"t", std::to_string(state.t + 1)}});
  }
  FilterState next;
  next.t = state.t + 1;
  next.forecast_mean = fc.f;
  next.forecast_variance = fc.Q;
  if (std::isnan(y)) {
    next.m = fc.a;
    next.C = fc.R;
    next.innovation = std::numeric_limits<double>::quiet_NaN();
    next.observed = false;
    return next;
  }
  const Eigen::VectorXd gain = fc.R * regressors / fc.Q;
  next.innovation = y - fc.f;
  next.m = fc.a + gain * next.innovation;
  next.C = fc.R - gain * fc.Q * gain.transpose();
  next.C = (0.5 * (next.C + next.C.transpose())).eval();
  next.observed = true;
  return next;
}

std::vector<StepForecast> forecast_k(const DlmSpec& spec, const FilterState& state, int k,
                                     std::span<const Eigen::VectorXd> future_regressors) {
  if (k < 1) throw invalid_argument("invalid_horizon", "horizon must be >= 1");
  if (static_cast<int>(future_regressors.size()) < k) {
    std::string missing;
    for (int j = static_cast<int>(future_regressors.size()) + 1; j <= k; ++j) {
      missing += (missing.empty() ? "" : ",") + std::string("t+") + std::to_string(j);
    }
    throw invalid_argument("missing_regressors", "no regression vector supplied for steps " + missing,
                           {{"missing_steps", missing}});
  }
  std::vector<StepForecast> out;
  out.reserve(static_cast<std::size_t>(k));
  const Eigen::MatrixXd& g = spec.evolution;
  const Eigen::MatrixXd w = spec.evolution_cov();
  Eigen::VectorXd a = state.m;
  Eigen::MatrixXd r = state.C;
  for (int j = 0; j < k; ++j) {
    const Eigen::VectorXd& f = future_regressors[static_cast<std::size_t>(j)];
    require_same_dimension("regression vector", spec.state_dim(), f.size());
    a = g * a;
    r = g * r * g.transpose() + w;
    r = (0.5 * (r + r.transpose())).eval();
    StepForecast step;
    step.a = a;
    step.R = r;
    step.f = f.dot(a);
    step.Q = f.dot(r * f) + spec.obs_variance;
    out.push_back(std::move(step));
  }
  return out;
}

FilterRun run_filter(const DlmSpec& spec, std::span<const double> observations,
                     std::span<const Eigen::VectorXd> regressors) {
  require_same_dimension("regressor rows", static_cast<long>(observations.size()), static_cast<long>(regressors.size()));
  FilterRun run;
  run.states.reserve(observations.size() + 1);
  run.one_step.reserve(observations.size());
  run.states.push_back(initial_state(spec));
  constexpr double kLog2Pi = 1.8378770664093454835606594728112;
  for (std::size_t t = 0; t < observations.size(); ++t) {
    run.one_step.push_back(one_step_forecast(spec, run.states.back(), regressors[t]));
    FilterState next = filter_step(spec, run.states.back(), observations[t], regressors[t]);
    if (next.observed) {
      run.log_likelihood += -0.5 * (kLog2Pi + std::log(next.forecast_variance) +
                                    next.innovation * next.innovation / next.forecast_variance);
    }
    run.states.push_back(std::move(next));
  }
  return run;
}

void PrecisionPrior::validate() const {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw invalid_argument("invalid_prior", "Gamma prior shape and rate must be positive");
  }
}

double PrecisionPrior::log_density(double precision) const {
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(precision) - rate * precision;
}

PrecisionFit fit_precisions(const DlmSpec& spec_template, std::span<const double> observations,
                            std::span<const Eigen::VectorXd> regressors, const PrecisionPrior& prior,
                            const PrecisionFitOptions& options) {
  prior.validate();
  const Eigen::Index p = spec_template.state_dim();
  if (static_cast<Eigen::Index>(observations.size()) < p + 5) {
    throw invalid_argument("precondition", "series must have at least state_dim + 5 observations",
                           {{"length", std::to_string(observations.size())}, {"required", std::to_string(p + 5)}});
  }
  const bool fixed_w = options.fix_evolution_zero;

  // Parameters are log precisions; the objective is the density in precision
  // space so the optimum is the MAP of (1/V, 1/w).
  auto log_posterior = [&](const Eigen::VectorXd& log_psi) {
    if ((log_psi.array().abs() > 60.0).any()) return -std::numeric_limits<double>::infinity();
    DlmSpec spec = spec_template;
    const double psi1 = std::exp(log_psi(0));
    spec.obs_variance = 1.0 / psi1;
    double value = prior.log_density(psi1);
    if (fixed_w) {
      spec.evolution_variance = 0.0;
    } else {
      const double psi2 = std::exp(log_psi(1));
      spec.evolution_variance = 1.0 / psi2;
      value += prior.log_density(psi2);
    }
    try {
      value += run_filter(spec, observations, regressors).log_likelihood;
    } catch (const Error&) {
      return -std::numeric_limits<double>::infinity();
    }
    return std::isfinite(value) ? value : -std::numeric_limits<double>::infinity();
  };

  // coarse log-grid, then polish the best few grid points
  const int g = std::max(options.grid_points, 3);
  const double lo = std::log(1e-4), hi = std::log(1e8);
  struct Start {
    Eigen::VectorXd x;
    double value;
  };
  std::vector<Start> grid;
  const Eigen::Index dims = fixed_w ? 1 : 2;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < (fixed_w ? 1 : g); ++j) {
      Eigen::VectorXd x(dims);
      x(0) = lo + (hi - lo) * i / (g - 1);
      if (!fixed_w) x(1) = lo + (hi - lo) * j / (g - 1);
      grid.push_back({x, log_posterior(x)});
    }
  }
  std::stable_sort(grid.begin(), grid.end(), [](const Start& a, const Start& b) { return a.value > b.value; });
  if (!std::isfinite(grid.front().value)) {
    throw numerical_failure("fit_failure", "prequential likelihood is not finite at any start");
  }

  optim::NelderMeadOptions nm;
  nm.max_evaluations = options.max_evaluations;
  nm.initial_step = 1.0;
  PrecisionFit best;
  best.log_posterior = -std::numeric_limits<double>::infinity();
  const std::size_t polish = std::min<std::size_t>(4, grid.size());
  for (std::size_t s = 0; s < polish; ++s) {
    if (!std::isfinite(grid[s].value)) break;
    const auto result = optim::minimize([&](const Eigen::VectorXd& x) { return -log_posterior(x); }, grid[s].x, nm);
    const double value = -result.value;
    if (value > best.log_posterior) {
      best.log_posterior = value;
      best.obs_variance = std::exp(-result.x(0));
      best.evolution_variance = fixed_w ? 0.0 : std::exp(-result.x(1));
    }
  }
  return best;
}

}  // namespace uqnet::dlm
