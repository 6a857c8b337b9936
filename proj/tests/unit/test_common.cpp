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

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "uqnet/common/gaussian_moments.hpp"
#include "uqnet/common/latin.hpp"
#include "uqnet/common/nelder_mead.hpp"
#include "uqnet/common/random.hpp"

using namespace uqnet;

TEST_SUITE("common") {

TEST_CASE("gaussian moments validation") {
  GaussianMoments ok(Eigen::Vector2d(1, 2), (Eigen::Matrix2d() << 2, 1, 1, 2).finished());
  CHECK_NOTHROW(ok.validate());
  GaussianMoments asym(Eigen::Vector2d(1, 2), (Eigen::Matrix2d() << 2, 1, 0.5, 2).finished());
  CHECK(testing::error_code([&] { asym.validate(); }) == "invalid_moments");
  GaussianMoments negative(Eigen::Vector2d(1, 2), (Eigen::Matrix2d() << -1, 0, 0, 2).finished());
  CHECK(testing::error_code([&] { negative.validate(); }) == "invalid_moments");
  GaussianMoments corr(Eigen::Vector2d(1, 2), (Eigen::Matrix2d() << 1, 1.5, 1.5, 1).finished());
  CHECK(testing::error_code([&] { corr.validate(); }) == "invalid_moments");
  GaussianMoments shape(Eigen::Vector3d(1, 2, 3), Eigen::Matrix2d::Identity());
  CHECK(testing::error_code([&] { shape.validate(); }) == "dimension_mismatch");
  CHECK_NOTHROW(GaussianMoments::scalar(3.0, 0.0).validate());
}

TEST_CASE("uniform draws are reproducible and in range") {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(a);
    CHECK(u == uniform01(b));
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) ++counts[uniform_index(a, 7)];
  for (int c : counts) CHECK(c > 800);
}

TEST_CASE("latin hypercube hits every stratum once per dimension") {
  Rng rng(3);
  const Eigen::MatrixXd x = random_latin_hypercube(25, 4, rng);
  for (Eigen::Index j = 0; j < 4; ++j) {
    std::set<int> strata;
    for (Eigen::Index i = 0; i < 25; ++i) strata.insert(static_cast<int>(std::floor(x(i, j) * 25)));
    CHECK(strata.size() == 25);
  }
}

TEST_CASE("nelder mead minimizes a shifted quadratic and ignores infeasible regions") {
  const auto f = [](const Eigen::VectorXd& x) {
    if (x(0) < -5) return std::numeric_limits<double>::quiet_NaN();
    return std::pow(x(0) - 1.5, 2) + 10 * std::pow(x(1) + 0.5, 2);
  };
  const auto r = optim::minimize(f, Eigen::Vector2d(-4, 3));
  CHECK(r.converged);
  CHECK(r.x(0) == doctest::Approx(1.5).epsilon(1e-4));
  CHECK(r.x(1) == doctest::Approx(-0.5).epsilon(1e-4));
}

}  // TEST_SUITE
