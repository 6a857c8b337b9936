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

// Dense-matrix evaluation of the GP posterior with explicit inverses. Kept
// deliberately naive: it shares no code with the emulator it checks.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct DenseGp {
  Eigen::MatrixXd z;       // standardized design
  Eigen::VectorXd f;
  Eigen::VectorXd lower, width;
  Eigen::VectorXd delta;
  double tau2;
  Eigen::MatrixXd r_inv;
  Eigen::MatrixXd h;
  Eigen::MatrixXd gram_inv;
  Eigen::VectorXd beta;
  double sigma2;

  DenseGp(const Eigen::MatrixXd& x, const Eigen::VectorXd& out, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
          const Eigen::VectorXd& lengthscales, double nugget)
      : f(out), lower(lo), width(hi - lo), delta(lengthscales), tau2(nugget) {
    const Eigen::Index n = x.rows(), p = x.cols();
    z.resize(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < p; ++j) z(i, j) = (x(i, j) - lower(j)) / width(j);
    Eigen::MatrixXd r(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) r(i, j) = corr(z.row(i).transpose(), z.row(j).transpose()) + (i == j ? tau2 : 0.0);
    r_inv = r.fullPivLu().inverse();
    h.resize(n, p + 1);
    h.col(0).setOnes();
    h.rightCols(p) = z;
    gram_inv = (h.transpose() * r_inv * h).fullPivLu().inverse();
    beta = gram_inv * h.transpose() * r_inv * f;
    const Eigen::MatrixXd proj = r_inv - r_inv * h * gram_inv * h.transpose() * r_inv;
    sigma2 = f.dot(proj * f) / static_cast<double>(n - (p + 1) - 2);
  }

  double corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    double s = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) s += std::pow((a(k) - b(k)) / delta(k), 2);
    return std::exp(-s);
  }

  Eigen::VectorXd standardize(const Eigen::VectorXd& x) const { return (x - lower).cwiseQuotient(width); }

  double mean(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd zs = standardize(x);
    Eigen::VectorXd r(z.rows());
    for (Eigen::Index i = 0; i < z.rows(); ++i) r(i) = corr(zs, z.row(i).transpose());
    Eigen::VectorXd hs(zs.size() + 1);
    hs << 1.0, zs;
    return hs.dot(beta) + r.dot(r_inv * (f - h * beta));
  }

  double variance(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd zs = standardize(x);
    Eigen::VectorXd r(z.rows());
    for (Eigen::Index i = 0; i < z.rows(); ++i) r(i) = corr(zs, z.row(i).transpose());
    Eigen::VectorXd hs(zs.size() + 1);
    hs << 1.0, zs;
    const Eigen::VectorXd s = hs - h.transpose() * r_inv * r;
    return sigma2 * (1.0 + tau2 - r.dot(r_inv * r) + s.dot(gram_inv * s));
  }

  // log integrated likelihood with beta and sigma^2 integrated out
  double log_integrated_likelihood() const {
    const Eigen::Index n = z.rows(), q = h.cols();
    const Eigen::MatrixXd r = r_inv.inverse();
    const Eigen::MatrixXd proj = r_inv - r_inv * h * gram_inv * h.transpose() * r_inv;
    const double s2 = f.dot(proj * f);
    return -0.5 * std::log(r.determinant()) - 0.5 * std::log((h.transpose() * r_inv * h).determinant()) -
           0.5 * static_cast<double>(n - q) * std::log(s2);
  }
};

}  // namespace oracle
