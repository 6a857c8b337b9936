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

#include "uqnet/gp/design.hpp"

#include <cmath>
#include <string>

#include "uqnet/common/error.hpp"

namespace uqnet::gp {

Eigen::VectorXd TrendBasis::eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd h(x.size() + 1);
  h(0) = 1.0;
  h.tail(x.size()) = x;
  return h;
}

Eigen::MatrixXd TrendBasis::design_matrix(const Eigen::MatrixXd& inputs) const {
  Eigen::MatrixXd h(inputs.rows(), inputs.cols() + 1);
  h.col(0).setOnes();
  h.rightCols(inputs.cols()) = inputs;
  return h;
}

void Design::validate(Eigen::Index min_runs) const {
  if (static_cast<Eigen::Index>(domains.size()) != dim()) {
    throw invalid_argument("invalid_design", "one domain is required per input dimension",
                           {{"domains", std::to_string(domains.size())}, {"inputs", std::to_string(dim())}});
  }
  require_same_dimension("design outputs", size(), outputs.size());
  if (!input_names.empty() && static_cast<Eigen::Index>(input_names.size()) != dim()) {
    throw invalid_argument("invalid_design", "input_names must name every input dimension");
  }
  if (size() < min_runs) {
    throw invalid_argument("precondition", "design has " + std::to_string(size()) + " runs but at least " +
                                               std::to_string(min_runs) + " are required",
                           {{"n", std::to_string(size())}, {"required", std::to_string(min_runs)}});
  }
  for (Eigen::Index j = 0; j < dim(); ++j) {
    const Domain& d = domains[static_cast<std::size_t>(j)];
    if (!(d.upper > d.lower)) {
      throw invalid_argument("invalid_design", "degenerate domain for input " + std::to_string(j),
                             {{"input", std::to_string(j)}});
    }
    const double slack = 1e-9 * d.width();
    for (Eigen::Index i = 0; i < size(); ++i) {
      const double v = inputs(i, j);
      if (!std::isfinite(v) || v < d.lower - slack || v > d.upper + slack) {
        throw invalid_argument("invalid_design", "design row " + std::to_string(i) + " lies outside the domain of input " + std::to_string(j),
                               {{"row", std::to_string(i)}, {"input", std::to_string(j)}});
      }
    }
  }
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (!std::isfinite(outputs(i))) {
      throw invalid_argument("invalid_design", "non-finite output at row " + std::to_string(i),
                             {{"row", std::to_string(i)}});
    }
  }
}

Eigen::VectorXd Design::standardize(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  require_same_dimension("input point", dim(), x.size());
  Eigen::VectorXd z(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const Domain& d = domains[static_cast<std::size_t>(j)];
    z(j) = (x(j) - d.lower) / d.width();
  }
  return z;
}

Eigen::MatrixXd Design::standardized_inputs() const {
  Eigen::MatrixXd z(size(), dim());
  for (Eigen::Index i = 0; i < size(); ++i) z.row(i) = standardize(inputs.row(i).transpose()).transpose();
  return z;
}

Design Design::without_row(Eigen::Index row) const {
  Design out;
  out.domains = domains;
  out.input_names = input_names;
  const Eigen::Index n = size();
  out.inputs.resize(n - 1, dim());
  out.outputs.resize(n - 1);
  for (Eigen::Index i = 0, k = 0; i < n; ++i) {
    if (i == row) continue;
    out.inputs.row(k) = inputs.row(i);
    out.outputs(k) = outputs(i);
    ++k;
  }
  return out;
}

Design Design::head(Eigen::Index rows) const {
  return Design{domains, inputs.topRows(rows), outputs.head(rows), input_names};
}

Design Design::tail(Eigen::Index rows) const {
  return Design{domains, inputs.bottomRows(rows), outputs.tail(rows), input_names};
}

}  // namespace uqnet::gp
