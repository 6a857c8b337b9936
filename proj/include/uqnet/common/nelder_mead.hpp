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

#include <functional>

#include <Eigen/Dense>

namespace uqnet::optim {

struct NelderMeadOptions {
  int max_evaluations = 4000;
  double tolerance = 1e-10;   // spread of simplex objective values
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Minimizes `objective` from `start`. Non-finite objective values are treated
// as +infinity so infeasible regions are simply avoided.
NelderMeadResult minimize(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& start, const NelderMeadOptions& options = {});

}  // namespace uqnet::optim
