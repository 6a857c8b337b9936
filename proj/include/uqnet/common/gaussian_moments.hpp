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

namespace uqnet {

// First and second moments of a (possibly multivariate) predictive belief.
// Every node in a propagation graph reports its output in this form.
struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  GaussianMoments() = default;
  GaussianMoments(Eigen::VectorXd m, Eigen::MatrixXd c) : mean(std::move(m)), cov(std::move(c)) {}

  static GaussianMoments scalar(double m, double v) {
    return GaussianMoments(Eigen::VectorXd::Constant(1, m), Eigen::MatrixXd::Constant(1, 1, v));
  }

  Eigen::Index dim() const { return mean.size(); }
  double scalar_mean() const { return mean(0); }
  double scalar_variance() const { return cov(0, 0); }

  // Throws unless cov is square, matches mean, symmetric, has a nonnegative
  // diagonal and implied correlations within [-1, 1] (up to 1e-10).
  void validate() const;
};

}  // namespace uqnet
