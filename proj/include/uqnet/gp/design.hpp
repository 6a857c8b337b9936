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

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace uqnet::gp {

struct Domain {
  double lower = 0.0;
  double upper = 1.0;
  double width() const { return upper - lower; }
};

// Constant-plus-linear regression basis h(x) = (1, x_1, ..., x_p).
class TrendBasis {
 public:
  static constexpr const char* kName = "constant+linear";

  Eigen::Index size(Eigen::Index input_dim) const { return input_dim + 1; }
  Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& inputs) const;
};

// Training runs of a simulator: inputs X (n x p) with declared domains and
// scalar outputs F.
struct Design {
  std::vector<Domain> domains;
  Eigen::MatrixXd inputs;
  Eigen::VectorXd outputs;
  std::vector<std::string> input_names;  // optional, empty or size p

  Eigen::Index size() const { return inputs.rows(); }
  Eigen::Index dim() const { return inputs.cols(); }

  // Shape checks, domain membership and n >= min_runs.
  void validate(Eigen::Index min_runs) const;

  Eigen::VectorXd standardize(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::MatrixXd standardized_inputs() const;

  Design without_row(Eigen::Index row) const;
  Design head(Eigen::Index rows) const;
  Design tail(Eigen::Index rows) const;
};

}  // namespace uqnet::gp
