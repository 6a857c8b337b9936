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

#include "uqnet/gp/kernel.hpp"

#include <cmath>
#include <string>

#include "uqnet/common/error.hpp"

namespace uqnet::gp {

void KernelSpec::validate() const {
  if (lengthscales.size() == 0) {
    throw invalid_argument("invalid_kernel", "kernel needs at least one lengthscale");
  }
  for (Eigen::Index i = 0; i < lengthscales.size(); ++i) {
    if (!(lengthscales(i) > 0.0) || !std::isfinite(lengthscales(i))) {
      throw invalid_argument("invalid_kernel", "lengthscale " + std::to_string(i) + " must be positive",
                             {{"index", std::to_string(i)}});
    }
  }
  if (!(nugget >= 0.0) || !std::isfinite(nugget)) {
    throw invalid_argument("invalid_kernel", "nugget must be nonnegative");
  }
}

double eval_correlation(const KernelSpec& kernel, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y) {
  require_same_dimension("correlation input x", kernel.dim(), x.size());
  require_same_dimension("correlation input x'", kernel.dim(), y.size());
  const double q = ((x - y).array() / kernel.lengthscales.array()).square().sum();
  return std::exp(-q);
}

Eigen::MatrixXd correlation_matrix(const KernelSpec& kernel, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  require_same_dimension("correlation matrix inputs", kernel.dim(), a.cols());
  require_same_dimension("correlation matrix inputs", kernel.dim(), b.cols());
  const Eigen::ArrayXd inv = kernel.lengthscales.array().inverse();
  Eigen::MatrixXd out(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      out(i, j) = std::exp(-((a.row(i) - b.row(j)).transpose().array() * inv).square().sum());
    }
  }
  return out;
}

}  // namespace uqnet::gp
