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

#include <cmath>

#include <Eigen/Dense>

namespace uqnet::gp::detail {

// Cholesky of R + nugget*I, rejecting factors whose pivots collapse to round-off.
inline bool factorize(const Eigen::MatrixXd& r, double nugget, Eigen::LLT<Eigen::MatrixXd>& llt) {
  Eigen::MatrixXd m = r;
  m.diagonal().array() += nugget;
  llt.compute(m);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd pivots = llt.matrixLLT().diagonal();
  const double smallest = pivots.minCoeff();
  return std::isfinite(smallest) && smallest * smallest > 1e-15 * pivots.maxCoeff() * pivots.maxCoeff();
}

}  // namespace uqnet::gp::detail
