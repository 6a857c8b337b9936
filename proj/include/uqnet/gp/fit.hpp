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

#include "uqnet/gp/emulator.hpp"

namespace uqnet::gp {

struct HyperparamSearchConfig {
  int restarts = 8;
  std::uint64_t seed = 20210901;
  int max_evaluations = 3000;
  bool estimate_nugget = true;
  double fixed_nugget = 1e-8;  // used when estimate_nugget is false

  // Log-normal penalties on the lengthscales and the nugget.
  double lengthscale_median = 0.5;  // half the standardized domain width
  double lengthscale_log_sd = 1.0;
  double nugget_median = 1e-6;
  double nugget_log_sd = 10.0;

  // Search box in log space.
  double min_lengthscale = 1e-3;
  double max_lengthscale = 1e3;
  double min_nugget = 1e-8;
  double max_nugget = 1.0;
};

// Log integrated likelihood of (lengthscales, nugget) with beta and sigma^2
// integrated out, without the hyperparameter penalties. Returns -inf if the
// correlation matrix does not factorize.
double log_integrated_likelihood(const Design& design, const KernelSpec& kernel);

// The full MAP objective: integrated likelihood plus log-normal penalties.
double log_marginal_posterior(const Design& design, const KernelSpec& kernel,
                              const HyperparamSearchConfig& config);

// Multi-start Nelder-Mead search in log-hyperparameter space. Restarts run
// concurrently; the winner is the best objective, ties to the lowest restart.
GpEmulator fit_gp(const Design& design, const HyperparamSearchConfig& config = {});

}  // namespace uqnet::gp
