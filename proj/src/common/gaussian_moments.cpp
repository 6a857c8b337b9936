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

#include "uqnet/common/gaussian_moments.hpp"

#include <cmath>

#include "uqnet/common/error.hpp"

namespace uqnet {

void GaussianMoments::validate() const {
  if (cov.rows() != cov.cols()) {
    throw invalid_argument("invalid_moments", "covariance must be square");
  }
  require_same_dimension("covariance", mean.size(), cov.rows());
  const double scale = cov.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    if (!(cov(i, i) >= 0.0)) {
      throw invalid_argument("invalid_moments", "negative variance on the covariance diagonal");
    }
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(cov(i, j) - cov(j, i)) > 1e-12 * (1.0 + scale)) {
        throw invalid_argument("invalid_moments", "covariance is not symmetric");
      }
      const double denom = std::sqrt(cov(i, i) * cov(j, j));
      if (std::abs(cov(i, j)) > (1.0 + 1e-10) * denom + 1e-300) {
        throw invalid_argument("invalid_moments", "implied correlation outside [-1, 1]");
      }
    }
  }
}

}  // namespace uqnet
