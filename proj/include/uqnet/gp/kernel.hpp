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

namespace uqnet::gp {

// Squared-exponential correlation with per-dimension lengthscales and a
// nugget. The nugget is a ratio to the process variance: the training matrix
// is R + nugget * I and the predictive variance carries a (1 + nugget) term.
struct KernelSpec {
  Eigen::VectorXd lengthscales;
  double nugget = 0.0;

  Eigen::Index dim() const { return lengthscales.size(); }
  void validate() const;
};

// exp{-sum_i ((x_i - y_i) / delta_i)^2}. The nugget is not added here; it is
// applied by whoever assembles a training matrix.
double eval_correlation(const KernelSpec& kernel, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y);

// Correlation matrix between the rows of `a` and the rows of `b`.
Eigen::MatrixXd correlation_matrix(const KernelSpec& kernel, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace uqnet::gp
