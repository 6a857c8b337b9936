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

#include "uqnet/network/gauss_integrals.hpp"

#include <cmath>

#include "uqnet/common/error.hpp"

namespace uqnet::network {

void require_psd(const GaussianMoments& law) {
  const Eigen::MatrixXd& s = law.cov;
  if (s.rows() != s.cols()) throw invalid_argument("invalid_law", "input covariance must be square");
  require_same_dimension("input law covariance", law.mean.size(), s.rows());
  if (s.size() == 0) return;
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw invalid_argument("invalid_law", "input covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
    throw invalid_argument("invalid_law", "input covariance is not positive semidefinite");
  }
}

KernelExpectations::KernelExpectations(const gp::KernelSpec& kernel, const GaussianMoments& law) : law_(law) {
  kernel.validate();
  require_same_dimension("input law", kernel.dim(), law.mean.size());
  require_psd(law);
  law_.cov = 0.5 * (law.cov + law.cov.transpose());
  lambda_ = kernel.lengthscales.array().square().inverse();
  const Eigen::MatrixXd inv_lambda = kernel.lengthscales.array().square().matrix().asDiagonal();
  m1_.compute(2.0 * law_.cov + inv_lambda);
  m2_.compute(2.0 * law_.cov + 0.5 * inv_lambda);
  if (m1_.info() != Eigen::Success || m2_.info() != Eigen::Success) {
    throw numerical_failure("factorization_failed", "kernel expectation matrices are not positive definite");
  }
  // log-determinants from the eigenvalues of Lambda^{1/2} Sigma Lambda^{1/2}
  const Eigen::VectorXd root = lambda_.sqrt().matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(root.asDiagonal() * law_.cov * root.asDiagonal(),
                                                     Eigen::EigenvaluesOnly);
  const Eigen::ArrayXd ev = eig.eigenvalues().array().max(0.0);
  half_logdet1_ = 0.5 * (2.0 * ev).log1p().sum();
  half_logdet2_ = 0.5 * (4.0 * ev).log1p().sum();
  const Eigen::MatrixXd s_lambda = law_.cov * lambda_.matrix().asDiagonal();
  p1_ = m1_.solve(s_lambda).transpose();
  p1_ = (0.5 * (p1_ + p1_.transpose())).eval();
  p2_ = m2_.solve(s_lambda).transpose();
  p2_ = (0.5 * (p2_ + p2_.transpose())).eval();
}

double KernelExpectations::log_mean(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  const Eigen::VectorXd d = law_.mean - xi;
  return -half_logdet1_ - d.dot(m1_.solve(d));
}

double KernelExpectations::mean(const Eigen::Ref<const Eigen::VectorXd>& xi) const { return std::exp(log_mean(xi)); }

double KernelExpectations::log_second(const Eigen::Ref<const Eigen::VectorXd>& xi,
                                      const Eigen::Ref<const Eigen::VectorXd>& xj) const {
  const Eigen::VectorXd diff = xi - xj;
  const Eigen::VectorXd d = law_.mean - 0.5 * (xi + xj);
  return -0.5 * (diff.array().square() * lambda_).sum() - half_logdet2_ - d.dot(m2_.solve(d));
}

double KernelExpectations::second(const Eigen::Ref<const Eigen::VectorXd>& xi,
                                  const Eigen::Ref<const Eigen::VectorXd>& xj) const {
  return std::exp(log_second(xi, xj));
}

Eigen::VectorXd KernelExpectations::linear(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  return mean(xi) * law_.mean + centered_linear(xi);
}

double KernelExpectations::centered_second(const Eigen::Ref<const Eigen::VectorXd>& xi,
                                           const Eigen::Ref<const Eigen::VectorXd>& xj) const {
  // log(zeta_ij / (xi_i xi_j)); every term is O(Sigma)
  const Eigen::VectorXd a = law_.mean - xi;
  const Eigen::VectorXd b = law_.mean - xj;
  const Eigen::VectorXd c = a + b;
  const double log_ratio =
      2.0 * half_logdet1_ - half_logdet2_ + c.dot(p2_ * c) - 2.0 * a.dot(p1_ * a) - 2.0 * b.dot(p1_ * b);
  return std::exp(log_mean(xi) + log_mean(xj)) * std::expm1(log_ratio);
}

Eigen::VectorXd KernelExpectations::centered_linear(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  const Eigen::VectorXd d = xi - law_.mean;
  return 2.0 * mean(xi) * (law_.cov * m1_.solve(d));
}

double gauss_kernel_mean(const gp::KernelSpec& kernel, const Eigen::VectorXd& xi, const GaussianMoments& law) {
  require_same_dimension("design point", kernel.dim(), xi.size());
  return KernelExpectations(kernel, law).mean(xi);
}

double gauss_kernel_second(const gp::KernelSpec& kernel, const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                           const GaussianMoments& law) {
  require_same_dimension("design point", kernel.dim(), xi.size());
  require_same_dimension("design point", kernel.dim(), xj.size());
  return KernelExpectations(kernel, law).second(xi, xj);
}

Eigen::VectorXd gauss_kernel_linear(const gp::KernelSpec& kernel, const Eigen::VectorXd& xi, const GaussianMoments& law) {
  require_same_dimension("design point", kernel.dim(), xi.size());
  return KernelExpectations(kernel, law).linear(xi);
}

}  // namespace uqnet::network
