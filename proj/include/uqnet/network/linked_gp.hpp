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

#include <span>

#include <Eigen/Dense>

#include "uqnet/common/gaussian_moments.hpp"
#include "uqnet/gp/emulator.hpp"

namespace uqnet::network {

struct LinkedMoments {
  double mean = 0.0;
  double variance = 0.0;
  double expected_conditional_variance = 0.0;  // E[V[Y | X]]
  double variance_of_conditional_mean = 0.0;   // V[E[Y | X]]
  Eigen::VectorXd input_covariance;            // Cov(X, Y), raw input units
};

// Two-moment normal approximation to the output of `child` when its whole
// input vector is Gaussian, X ~ N(mu, Sigma) in raw units. Exogenous inputs
// are coordinates with zero variance.
LinkedMoments linked_gp_moments(const gp::GpEmulator& child, const GaussianMoments& input_law);

// Stochastic parents occupy `stochastic_coords` of the child's input vector
// with joint law `parent_law`; every other coordinate is fixed at the
// matching entry of `exogenous`.
LinkedMoments linked_gp_moments(const gp::GpEmulator& child, const GaussianMoments& parent_law,
                                std::span<const Eigen::Index> stochastic_coords, const Eigen::VectorXd& exogenous);

}  // namespace uqnet::network
