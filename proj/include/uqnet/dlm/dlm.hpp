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

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uqnet/common/gaussian_moments.hpp"

namespace uqnet::dlm {

// Univariate dynamic linear model
//   y(t)     = F(t)' theta(t) + v(t),      v ~ N(0, V)
//   theta(t) = G theta(t-1) + w(t),        w ~ N(0, w I)
// Regression vectors F(t) are supplied per step by the caller.
struct DlmSpec {
  Eigen::MatrixXd evolution;  // G; p x p
  double obs_variance = 1.0;  // V
  double evolution_variance = 0.0;  // scalar w, W = w I
  Eigen::VectorXd prior_mean;  // m(0)
  Eigen::MatrixXd prior_cov;   // C(0)

  // G = I, m(0) = 0, C(0) = prior_scale * I.
  static DlmSpec diffuse(Eigen::Index state_dim, double obs_variance, double evolution_variance,
                         double prior_scale = 1e6);

  Eigen::Index state_dim() const { return evolution.rows(); }
  Eigen::MatrixXd evolution_cov() const;
  void validate() const;
};

// Posterior (theta(t) | D_t) ~ N(m, C) plus the one-step forecast that
// produced it. `observed` is false when y(t) was missing and the step only
// propagated the prior.
struct FilterState {
  int t = 0;
  Eigen::VectorXd m;
  Eigen::MatrixXd C;
  double innovation = 0.0;
  double forecast_mean = 0.0;
  double forecast_variance = 0.0;
  bool observed = false;
};

// Prior state moments a, R for some target time and the implied forecast
// N(f, Q) of y at that time.
struct StepForecast {
  Eigen::VectorXd a;
  Eigen::MatrixXd R;
  double f = 0.0;
  double Q = 0.0;

  GaussianMoments moments() const { return GaussianMoments::scalar(f, Q); }
};

FilterState initial_state(const DlmSpec& spec);

// a = G m, R = G C G' + W, f = F'a, Q = F'RF + V.
StepForecast one_step_forecast(const DlmSpec& spec, const FilterState& state, const Eigen::VectorXd& regressors);

// One Kalman update. A NaN observation is treated as missing.
FilterState filter_step(const DlmSpec& spec, const FilterState& state, double y, const Eigen::VectorXd& regressors);

// k-step forecasts from `state`; future_regressors[j] is F(t+j+1). Throws if
// fewer than k regression vectors are supplied, naming the missing steps.
std::vector<StepForecast> forecast_k(const DlmSpec& spec, const FilterState& state, int k,
                                     std::span<const Eigen::VectorXd> future_regressors);

struct FilterRun {
  std::vector<FilterState> states;        // states[0] is the prior, states[t] after y(t)
  std::vector<StepForecast> one_step;     // one_step[t-1] forecasts y(t) from D_{t-1}
  double log_likelihood = 0.0;            // sum of log N(y(t); f(t), Q(t)) over observed t
};

FilterRun run_filter(const DlmSpec& spec, std::span<const double> observations,
                     std::span<const Eigen::VectorXd> regressors);

// Independent Gamma(shape, rate) priors on the precisions 1/V and 1/w.
struct PrecisionPrior {
  double shape = 3.0;
  double rate = 0.01;

  void validate() const;
  double log_density(double precision) const;
  double mode() const { return (shape - 1.0) / rate; }
};

struct PrecisionFitOptions {
  bool fix_evolution_zero = false;  // hold w = 0 and estimate V only
  int grid_points = 13;
  int max_evaluations = 2000;
};

struct PrecisionFit {
  double obs_variance = 0.0;
  double evolution_variance = 0.0;
  double log_posterior = 0.0;
};

// MAP of (1/V, 1/w) under the prequential likelihood of the filter and the
// Gamma priors. `spec_template` supplies G and the prior state moments.
PrecisionFit fit_precisions(const DlmSpec& spec_template, std::span<const double> observations,
                            std::span<const Eigen::VectorXd> regressors, const PrecisionPrior& prior = {},
                            const PrecisionFitOptions& options = {});

}  // namespace uqnet::dlm
