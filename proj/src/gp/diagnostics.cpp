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

#include "uqnet/gp/diagnostics.hpp"

#include <cmath>
#include <string>

#include "uqnet/common/error.hpp"

namespace uqnet::gp {

bool within_two_sd(double observed, double mean, double sd) {
  return std::abs(observed - mean) <= 2.0 * sd + 1e-10 * (1.0 + std::abs(observed));
}

std::vector<HoldoutRecord> loo_diagnostics(const GpEmulator& emulator) {
  const Design& design = emulator.design();
  const Eigen::Index q = emulator.trend().size(design.dim());
  if (design.size() < q + 4) {
    throw invalid_argument("precondition", "leave-one-out needs at least q + 4 runs",
                           {{"n", std::to_string(design.size())}, {"required", std::to_string(q + 4)}});
  }
  std::vector<HoldoutRecord> out;
  out.reserve(static_cast<std::size_t>(design.size()));
  for (Eigen::Index i = 0; i < design.size(); ++i) {
    HoldoutRecord rec;
    rec.point = design.inputs.row(i).transpose();
    rec.observed = design.outputs(i);
    try {
      const GpEmulator fold = GpEmulator::build(design.without_row(i), emulator.kernel(), {.escalate_nugget = false});
      const PointPrediction p = fold.predict(rec.point);
      rec.mean = p.mean;
      rec.sd = p.sd();
      rec.within_two_sd = within_two_sd(rec.observed, rec.mean, rec.sd);
    } catch (const Error& e) {
      rec.error = e.code() + ": " + e.what();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<HoldoutRecord> holdout_diagnostics(const GpEmulator& emulator, const Design& validation) {
  std::vector<HoldoutRecord> out;
  out.reserve(static_cast<std::size_t>(validation.size()));
  for (Eigen::Index i = 0; i < validation.size(); ++i) {
    HoldoutRecord rec;
    rec.point = validation.inputs.row(i).transpose();
    rec.observed = validation.outputs(i);
    const PointPrediction p = emulator.predict(rec.point);
    rec.mean = p.mean;
    rec.sd = p.sd();
    rec.within_two_sd = within_two_sd(rec.observed, rec.mean, rec.sd);
    out.push_back(std::move(rec));
  }
  return out;
}

double coverage(std::span<const HoldoutRecord> records) {
  std::size_t total = 0;
  std::size_t inside = 0;
  for (const auto& r : records) {
    if (r.error) continue;
    ++total;
    if (r.within_two_sd) ++inside;
  }
  return total == 0 ? 0.0 : static_cast<double>(inside) / static_cast<double>(total);
}

double rmse(std::span<const double> predictions, std::span<const double> truth) {
  if (predictions.size() != truth.size()) {
    throw invalid_argument("dimension_mismatch", "rmse: prediction and truth lengths differ",
                           {{"predictions", std::to_string(predictions.size())}, {"truth", std::to_string(truth.size())}});
  }
  if (predictions.empty()) throw invalid_argument("precondition", "rmse of an empty vector");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = predictions[i] - truth[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(truth.size()));
}

}  // namespace uqnet::gp
