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

#include "uqnet/common/random.hpp"

namespace uqnet {

// Random Latin hypercube on [0,1]^d: column j is a jittered permutation of
// the n strata, so each 1-D projection hits every stratum exactly once.
Eigen::MatrixXd random_latin_hypercube(Eigen::Index n, Eigen::Index d, Rng& rng);

}  // namespace uqnet
