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
#include <optional>

#include <Eigen/Dense>

#include "uqnet/gp/design.hpp"
#include "uqnet/gp/kernel.hpp"

namespace uqnet::gp {

struct PointPrediction {
  double mean = 0.0;
  double variance = 0.0;
  double sd() const;
};

// Summary of the hyperparameter search that produced an emulator.
struct FitReport {
  double log_posterior = 0.0;
  int restart_index = -1;   // -1 when hyperparameters were supplied directly
  int evaluations = 0;
  std::uint64_t seed = 0;
};

struct BuildOptions {
  // Raise the nugget to 1e-6 and then 1e-4 if R + nugget*I will not factorize.
  bool escalate_nugget = true;
};

// Fitted Gaussian-process emulator with the regression coefficients and the
// variance scale profiled out under the 1/sigma^2 reference prior. The
// posterior is Student-t with n - q degrees of freedom; we only ever use its
// first two moments. Inputs are standardized to [0,1] per declared domain, and
// lengthscales are in those units. Immutable once built.
class GpEmulator {
 public:
  // Builds the emulator for fixed (standardized) hyperparameters.
  static GpEmulator build(Design design, KernelSpec kernel, BuildOptions options = {},
                          FitReport report = {});

  PointPrediction predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  const Design& design() const { return design_; }
  const TrendBasis& trend() const { return trend_; }
  const KernelSpec& kernel() const { return kernel_; }
  const Eigen::VectorXd& beta_hat() const { return beta_; }
  double sigma2_hat() const { return sigma2_; }
  Eigen::Index degrees_of_freedom() const { return design_.size() - trend_.size(design_.dim()); }
  const FitReport& fit_report() const { return report_; }
  Eigen::Index input_dim() const { return design_.dim(); }

  // Pieces used by closed-form moment propagation; all in standardized units.
  const Eigen::MatrixXd& standardized_inputs() const { return z_; }
  // (R + nugget I)^{-1} (F - H beta)
  const Eigen::VectorXd& residual_weights() const { return weights_; }
  // With R + nugget I = L L': L^{-1} M, L^{-1} (F - H beta) and L^{-1} H.
  Eigen::MatrixXd whiten(const Eigen::MatrixXd& m) const { return llt_.matrixL().solve(m); }
  const Eigen::VectorXd& whitened_residuals() const { return white_resid_; }
  const Eigen::MatrixXd& whitened_trend() const { return white_h_; }
  // (R + nugget I)^{-1}
  const Eigen::MatrixXd& inverse_correlation() const { return r_inv_; }
  Eigen::VectorXd solve_correlation(const Eigen::VectorXd& v) const { return llt_.solve(v); }
  // H^T (R + nugget I)^{-1}, q x n
  const Eigen::MatrixXd& projected_trend() const { return b_; }
  // (H^T (R + nugget I)^{-1} H)^{-1}
  const Eigen::MatrixXd& inverse_trend_gram() const { return k_inv_; }

 private:
  GpEmulator() = default;

  Design design_;
  TrendBasis trend_;
  KernelSpec kernel_;
  FitReport report_;
  Eigen::MatrixXd z_;
  Eigen::MatrixXd h_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::MatrixXd r_inv_;
  Eigen::MatrixXd b_;
  Eigen::MatrixXd k_inv_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd white_resid_;
  Eigen::MatrixXd white_h_;
  double sigma2_ = 0.0;
};

}  // namespace uqnet::gp
