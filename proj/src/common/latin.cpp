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

#include "uqnet/common/latin.hpp"

#include <numeric>
#include <vector>

namespace uqnet {

Eigen::MatrixXd random_latin_hypercube(Eigen::Index n, Eigen::Index d, Rng& rng) {
  Eigen::MatrixXd unit(n, d);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    shuffle(perm, rng);
    for (Eigen::Index i = 0; i < n; ++i) {
      unit(i, j) = (static_cast<double>(perm[static_cast<std::size_t>(i)]) + uniform01(rng)) /
                   static_cast<double>(n);
    }
  }
  return unit;
}

}  // namespace uqnet
