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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uqnet/gp/emulator.hpp"

namespace uqnet::gp {

struct HoldoutRecord {
  Eigen::VectorXd point;
  double observed = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  bool within_two_sd = false;
  std::optional<std::string> error;  // set when the fold could not be built
};

// True iff |observed - mean| <= 2 sd, with a round-off allowance of
// 1e-10 (1 + |observed|).
bool within_two_sd(double observed, double mean, double sd);

// Leave-one-out with hyperparameters held at the full-fit values; beta and
// sigma^2 are re-estimated on each fold.
std::vector<HoldoutRecord> loo_diagnostics(const GpEmulator& emulator);

// Predictions of `emulator` at held-out runs.
std::vector<HoldoutRecord> holdout_diagnostics(const GpEmulator& emulator, const Design& validation);

// Fraction of records (excluding errored folds) inside their 2-sd interval.
double coverage(std::span<const HoldoutRecord> records);

double rmse(std::span<const double> predictions, std::span<const double> truth);

}  // namespace uqnet::gp
