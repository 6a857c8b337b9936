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

#include "uqnet/network/mdm.hpp"

#include <algorithm>
#include <string>

#include "uqnet/common/error.hpp"

namespace uqnet::network {

MdmMarginal mdm_marginal(const dlm::StepForecast& child_prior, double obs_variance,
                         const Eigen::VectorXd& regressor_mean, std::span<const Eigen::Index> stochastic_slots,
                         const Eigen::MatrixXd& parent_cov) {
  const Eigen::Index p = child_prior.a.size();
  require_same_dimension("regression vector", p, regressor_mean.size());
  const auto k = static_cast<Eigen::Index>(stochastic_slots.size());
  require_same_dimension("parent covariance", k, parent_cov.rows());
  require_same_dimension("parent covariance", k, parent_cov.cols());

  MdmMarginal out;
  out.regressor_mean = regressor_mean;
  out.omega = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index si = stochastic_slots[static_cast<std::size_t>(i)];
    if (si < 0 || si >= p) throw invalid_argument("binding_error", "stochastic slot " + std::to_string(si) + " out of range");
    for (Eigen::Index j = 0; j < k; ++j) out.omega(si, stochastic_slots[static_cast<std::size_t>(j)]) = parent_cov(i, j);
  }

  const Eigen::VectorXd& a = child_prior.a;
  const Eigen::MatrixXd& r = child_prior.R;
  const Eigen::MatrixXd second = regressor_mean * regressor_mean.transpose() + out.omega;
  const double mean = regressor_mean.dot(a);
  const double variance = (r.cwiseProduct(second.transpose())).sum() + a.dot(out.omega * a) + obs_variance;
  out.moments = GaussianMoments::scalar(mean, variance);

  const Eigen::VectorXd omega_a = out.omega * a;
  out.cross_cov.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) out.cross_cov(i) = omega_a(stochastic_slots[static_cast<std::size_t>(i)]);
  return out;
}

MdmMarginal mdm_marginal(const GaussianMoments& parent, const dlm::StepForecast& child_prior, double obs_variance,
                         std::span<const std::string> regressor_names, std::string_view parent_slot,
                         const Eigen::VectorXd& regressors) {
  require_same_dimension("parent forecast", 1, parent.mean.size());
  require_same_dimension("regressor names", child_prior.a.size(), static_cast<long>(regressor_names.size()));
  const auto it = std::find(regressor_names.begin(), regressor_names.end(), parent_slot);
  if (it == regressor_names.end()) {
    throw invalid_argument("binding_error", "regressor '" + std::string(parent_slot) + "' not found in child regression vector",
                           {{"slot", std::string(parent_slot)}});
  }
  const Eigen::Index slot = it - regressor_names.begin();
  Eigen::VectorXd mu = regressors;
  mu(slot) = parent.scalar_mean();
  const Eigen::Index slots[] = {slot};
  return mdm_marginal(child_prior, obs_variance, mu, slots, parent.cov);
}

}  // namespace uqnet::network
