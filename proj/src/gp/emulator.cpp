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

#include "uqnet/gp/emulator.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "uqnet/common/error.hpp"
#include "cholesky.hpp"

namespace uqnet::gp {
namespace {

std::string describe(const KernelSpec& kernel) {
  std::ostringstream out;
  out.precision(17);
  out << "delta=[";
  for (Eigen::Index i = 0; i < kernel.dim(); ++i) out << (i ? "," : "") << kernel.lengthscales(i);
  out << "] tau2=" << kernel.nugget;
  return out.str();
}

bool has_duplicate_rows(const Eigen::MatrixXd& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (z.row(i) == z.row(j)) return true;
    }
  }
  return false;
}

}  // namespace

double PointPrediction::sd() const { return std::sqrt(std::max(variance, 0.0)); }

GpEmulator GpEmulator::build(Design design, KernelSpec kernel, BuildOptions options, FitReport report) {
  kernel.validate();
  require_same_dimension("kernel lengthscales", design.dim(), kernel.dim());
  const Eigen::Index q = TrendBasis{}.size(design.dim());
  design.validate(q + 3);

  GpEmulator em;
  em.z_ = design.standardized_inputs();
  if (kernel.nugget == 0.0 && has_duplicate_rows(em.z_)) {
    throw invalid_argument("duplicate_design_rows", "design has repeated rows and a zero nugget");
  }
  em.h_ = em.trend_.design_matrix(em.z_);
  const Eigen::MatrixXd r = correlation_matrix(kernel, em.z_, em.z_);

  bool ok = detail::factorize(r, kernel.nugget, em.llt_);
  if (!ok && options.escalate_nugget) {
    for (double raised : {1e-6, 1e-4}) {
      if (kernel.nugget >= raised) continue;
      kernel.nugget = raised;
      if ((ok = detail::factorize(r, kernel.nugget, em.llt_))) break;
    }
  }
  if (!ok) {
    throw numerical_failure("fit_failure", "correlation matrix is not positive definite (" + describe(kernel) + ")",
                            {{"hyperparameters", describe(kernel)}});
  }

  const Eigen::Index n = design.size();
  em.r_inv_ = em.llt_.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd rinv_h = em.llt_.solve(em.h_);
  Eigen::LLT<Eigen::MatrixXd> gram(em.h_.transpose() * rinv_h);
  if (gram.info() != Eigen::Success) {
    throw numerical_failure("fit_failure", "trend Gram matrix H^T R^-1 H is singular (" + describe(kernel) + ")",
                            {{"hyperparameters", describe(kernel)}});
  }
  em.k_inv_ = gram.solve(Eigen::MatrixXd::Identity(q, q));
  em.b_ = rinv_h.transpose();
  em.beta_ = gram.solve(em.b_ * design.outputs);
  const Eigen::VectorXd resid = design.outputs - em.h_ * em.beta_;
  em.weights_ = em.llt_.solve(resid);
  em.white_resid_ = em.llt_.matrixL().solve(resid);
  em.white_h_ = em.llt_.matrixL().solve(em.h_);
  const double quad = em.white_resid_.squaredNorm();
  em.sigma2_ = std::max(quad / static_cast<double>(n - q - 2), std::numeric_limits<double>::min());

  em.design_ = std::move(design);
  em.kernel_ = std::move(kernel);
  em.report_ = report;
  return em;
}

PointPrediction GpEmulator::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Eigen::VectorXd z = design_.standardize(x);
  Eigen::VectorXd r(z_.rows());
  for (Eigen::Index i = 0; i < z_.rows(); ++i) r(i) = eval_correlation(kernel_, z, z_.row(i).transpose());
  const Eigen::VectorXd h = trend_.eval(z);
  const Eigen::VectorXd u = llt_.matrixL().solve(r);
  const Eigen::VectorXd s = h - white_h_.transpose() * u;

  PointPrediction out;
  out.mean = h.dot(beta_) + u.dot(white_resid_);
  out.variance = sigma2_ * (1.0 + kernel_.nugget - u.squaredNorm() + s.dot(k_inv_ * s));
  if (out.variance < 0.0) {
    if (out.variance < -1e-12 * sigma2_ * (1.0 + kernel_.nugget)) {
      throw numerical_failure("negative_variance", "predictive variance is materially negative");
    }
    out.variance = 0.0;
  }
  return out;
}

}  // namespace uqnet::gp
