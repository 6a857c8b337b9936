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
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "uqnet/common/gaussian_moments.hpp"
#include "uqnet/dlm/dlm.hpp"

namespace uqnet::network {

struct MdmMarginal {
  GaussianMoments moments;        // 1-D marginal forecast of the child series
  Eigen::VectorXd cross_cov;      // Cov(parent_k, child) for each stochastic slot
  Eigen::VectorXd regressor_mean; // mu~, expected regression vector
  Eigen::MatrixXd omega;          // Omega~, covariance of the regression vector
};

// Marginal forecast of a child DLM whose regression vector has stochastic
// entries. With mu~ = E[F], Omega~ = Cov(F) (zero outside the stochastic
// slots) and the child's prior state moments (a, R):
//   mean     = mu~' a
//   variance = tr{R (mu~ mu~' + Omega~)} + a' Omega~ a + V
//   Cov(F_s, y) = (Omega~ a)_s
// `regressor_mean` already holds the parent means in the stochastic slots.
MdmMarginal mdm_marginal(const dlm::StepForecast& child_prior, double obs_variance,
                         const Eigen::VectorXd& regressor_mean, std::span<const Eigen::Index> stochastic_slots,
                         const Eigen::MatrixXd& parent_cov);

// Single parent bound to the regressor named `parent_slot`. `regressors` holds
// the exogenous regression vector; the parent's slot entry is ignored.
MdmMarginal mdm_marginal(const GaussianMoments& parent, const dlm::StepForecast& child_prior, double obs_variance,
                         std::span<const std::string> regressor_names, std::string_view parent_slot,
                         const Eigen::VectorXd& regressors);

}  // namespace uqnet::network
