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

#include <Eigen/Dense>

#include "uqnet/common/gaussian_moments.hpp"
#include "uqnet/gp/kernel.hpp"

namespace uqnet::network {

// Expectations of squared-exponential correlations under a Gaussian input
// law X ~ N(mu, Sigma), in the kernel's own coordinates. With
// Lambda = diag(1/delta_k^2):
//   xi_i    = E[r(X, x_i)]
//           = |I + 2 Sigma Lambda|^{-1/2} exp{-(mu - x_i)'(2 Sigma + Lambda^{-1})^{-1}(mu - x_i)}
//   zeta_ij = E[r(X, x_i) r(X, x_j)]
//           = exp{-(x_i - x_j)' Lambda (x_i - x_j) / 2} |I + 4 Sigma Lambda|^{-1/2}
//             exp{-(mu - c)'(2 Sigma + Lambda^{-1}/2)^{-1}(mu - c)},  c = (x_i + x_j)/2
//   E[X r(X, x_i)] = xi_i (mu + 2 Sigma (2 Sigma + Lambda^{-1})^{-1} (x_i - mu))
// Sigma may be singular (point-mass coordinates); Sigma = 0 collapses to
// plain kernel evaluations.
class KernelExpectations {
 public:
  KernelExpectations(const gp::KernelSpec& kernel, const GaussianMoments& law);

  double log_mean(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  double mean(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  double log_second(const Eigen::Ref<const Eigen::VectorXd>& xi, const Eigen::Ref<const Eigen::VectorXd>& xj) const;
  double second(const Eigen::Ref<const Eigen::VectorXd>& xi, const Eigen::Ref<const Eigen::VectorXd>& xj) const;
  Eigen::VectorXd linear(const Eigen::Ref<const Eigen::VectorXd>& xi) const;

  // Cov(r(X,x_i), r(X,x_j)) = zeta_ij - xi_i xi_j, evaluated without the
  // cancellation of the naive difference.
  double centered_second(const Eigen::Ref<const Eigen::VectorXd>& xi, const Eigen::Ref<const Eigen::VectorXd>& xj) const;
  // Cov(X, r(X, x_i)) = 2 xi_i Sigma (2 Sigma + Lambda^{-1})^{-1} (x_i - mu).
  Eigen::VectorXd centered_linear(const Eigen::Ref<const Eigen::VectorXd>& xi) const;

  const GaussianMoments& law() const { return law_; }

 private:
  GaussianMoments law_;
  Eigen::ArrayXd lambda_;          // 1 / delta^2
  Eigen::LLT<Eigen::MatrixXd> m1_;  // 2 Sigma + Lambda^{-1}
  Eigen::LLT<Eigen::MatrixXd> m2_;  // 2 Sigma + Lambda^{-1} / 2
  double half_logdet1_ = 0.0;      // log |I + 2 Sigma Lambda| / 2
  double half_logdet2_ = 0.0;      // log |I + 4 Sigma Lambda| / 2
  Eigen::MatrixXd p1_;             // Lambda Sigma (2 Sigma + Lambda^{-1})^{-1}
  Eigen::MatrixXd p2_;             // Lambda Sigma (2 Sigma + Lambda^{-1} / 2)^{-1}
};

// Throws unless `law` has a symmetric positive-semidefinite covariance.
void require_psd(const GaussianMoments& law);

double gauss_kernel_mean(const gp::KernelSpec& kernel, const Eigen::VectorXd& xi, const GaussianMoments& law);
double gauss_kernel_second(const gp::KernelSpec& kernel, const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                           const GaussianMoments& law);
Eigen::VectorXd gauss_kernel_linear(const gp::KernelSpec& kernel, const Eigen::VectorXd& xi, const GaussianMoments& law);

}  // namespace uqnet::network
