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

#include "uqnet/network/linked_gp.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "uqnet/common/error.hpp"
#include "uqnet/network/gauss_integrals.hpp"

namespace uqnet::network {

LinkedMoments linked_gp_moments(const gp::GpEmulator& child, const GaussianMoments& input_law) {
  const gp::Design& design = child.design();
  const Eigen::Index p = child.input_dim();
  const Eigen::Index n = design.size();
  require_same_dimension("linked input law", p, input_law.mean.size());
  require_psd(input_law);

  // A point mass is an ordinary prediction.
  std::vector<Eigen::Index> stochastic;
  for (Eigen::Index k = 0; k < p; ++k) {
    if (input_law.cov(k, k) > 0.0) stochastic.push_back(k);
  }
  if (stochastic.empty()) {
    const gp::PointPrediction pp = child.predict(input_law.mean);
    LinkedMoments out;
    out.mean = pp.mean;
    out.variance = out.expected_conditional_variance = pp.variance;
    out.input_covariance = Eigen::VectorXd::Zero(p);
    return out;
  }

  // Move the law into the emulator's standardized coordinates.
  Eigen::VectorXd width(p);
  for (Eigen::Index k = 0; k < p; ++k) width(k) = design.domains[static_cast<std::size_t>(k)].width();
  GaussianMoments z_law;
  z_law.mean = design.standardize(input_law.mean);
  z_law.cov = width.cwiseInverse().asDiagonal() * input_law.cov * width.cwiseInverse().asDiagonal();

  // Zero-variance coordinates leave a fixed factor rho_i of the product
  // kernel; the Gaussian integrals run over the stochastic block only.
  const auto ns = static_cast<Eigen::Index>(stochastic.size());
  gp::KernelSpec sub_kernel{child.kernel().lengthscales(stochastic), child.kernel().nugget};
  GaussianMoments sub_law(z_law.mean(stochastic), z_law.cov(stochastic, stochastic));
  const KernelExpectations ke(sub_kernel, sub_law);
  const Eigen::MatrixXd& z = child.standardized_inputs();
  const Eigen::Index q = p + 1;

  Eigen::VectorXd rho(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s2 = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      if (input_law.cov(k, k) > 0.0) continue;
      const double d = (z_law.mean(k) - z(i, k)) / child.kernel().lengthscales(k);
      s2 += d * d;
    }
    rho(i) = std::exp(-s2);
  }

  Eigen::VectorXd xi(n);
  Eigen::MatrixXd cov_r(n, n);                          // Cov(r_i, r_j)
  Eigen::MatrixXd cov_zr = Eigen::MatrixXd::Zero(p, n);  // Cov(Z, r_i)
  std::vector<Eigen::VectorXd> zs(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) zs[static_cast<std::size_t>(i)] = z.row(i)(stochastic).transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd& zi = zs[static_cast<std::size_t>(i)];
    xi(i) = rho(i) * ke.mean(zi);
    const Eigen::VectorXd lin = ke.centered_linear(zi);
    for (Eigen::Index a = 0; a < ns; ++a) cov_zr(stochastic[static_cast<std::size_t>(a)], i) = rho(i) * lin(a);
    for (Eigen::Index j = 0; j <= i; ++j) {
      cov_r(i, j) = cov_r(j, i) = rho(i) * rho(j) * ke.centered_second(zi, zs[static_cast<std::size_t>(j)]);
    }
  }

  // trend moments for h(z) = (1, z)
  Eigen::VectorXd mean_h(q);
  mean_h(0) = 1.0;
  mean_h.tail(p) = z_law.mean;
  Eigen::MatrixXd cov_h = Eigen::MatrixXd::Zero(q, q);
  cov_h.bottomRightCorner(p, p) = z_law.cov;
  Eigen::MatrixXd cov_hr = Eigen::MatrixXd::Zero(q, n);
  cov_hr.bottomRows(p) = cov_zr;

  // Quadratic forms in (R + nugget I)^{-1} go through its Cholesky factor L.
  const Eigen::VectorXd& beta = child.beta_hat();
  const Eigen::VectorXd& e = child.whitened_residuals();
  const Eigen::MatrixXd& wh = child.whitened_trend();
  const Eigen::MatrixXd& k_inv = child.inverse_trend_gram();
  const double sigma2 = child.sigma2_hat();
  const double nugget = child.kernel().nugget;
  const Eigen::VectorXd w_xi = child.whiten(xi);
  const Eigen::MatrixXd half = child.whiten(cov_r);
  Eigen::MatrixXd w_cov_r = child.whiten(half.transpose());
  w_cov_r = (0.5 * (w_cov_r + w_cov_r.transpose())).eval();
  const Eigen::MatrixXd w_cov_hr = child.whiten(cov_hr.transpose()).transpose();

  LinkedMoments out;
  out.mean = mean_h.dot(beta) + w_xi.dot(e);
  out.variance_of_conditional_mean = beta.dot(cov_h * beta) + 2.0 * beta.dot(w_cov_hr * e) + e.dot(w_cov_r * e);

  // E[(h - B r)(h - B r)'] split into its mean outer product and covariance
  const Eigen::VectorXd s_bar = mean_h - wh.transpose() * w_xi;
  const Eigen::MatrixXd cross = w_cov_hr * wh;
  const Eigen::MatrixXd cov_s = cov_h - cross - cross.transpose() + wh.transpose() * w_cov_r * wh;
  const double correlation_term = w_xi.squaredNorm() + w_cov_r.trace();
  const double trend_term = s_bar.dot(k_inv * s_bar) + (k_inv.cwiseProduct(cov_s)).sum();
  out.expected_conditional_variance = sigma2 * (1.0 + nugget - correlation_term + trend_term);

  // Round-off of the mean correlations is amplified by the weights in
  // (R + nugget I)^{-1}; below these magnitudes a negative result is noise.
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const Eigen::VectorXd abs_xi = xi.cwiseAbs();
  const double ev_noise = eps * sigma2 * abs_xi.dot(child.inverse_correlation().cwiseAbs() * abs_xi);
  const double ve_reach = child.residual_weights().cwiseAbs().dot(abs_xi);
  const double ve_noise = eps * ve_reach * ve_reach;

  const double scale = sigma2 * (1.0 + nugget);
  if (out.expected_conditional_variance < 0.0) {
    if (out.expected_conditional_variance < -(1e-10 * scale + ev_noise)) {
      throw numerical_failure("negative_variance", "expected conditional variance is materially negative");
    }
    out.expected_conditional_variance = 0.0;
  }
  if (out.variance_of_conditional_mean < 0.0) {
    if (out.variance_of_conditional_mean < -(1e-10 * (scale + out.mean * out.mean) + ve_noise)) {
      throw numerical_failure("negative_variance", "variance of the conditional mean is materially negative");
    }
    out.variance_of_conditional_mean = 0.0;
  }
  out.variance = out.expected_conditional_variance + out.variance_of_conditional_mean;

  // Cov(Z, m(Z)) in standardized units, then back to raw units
  Eigen::MatrixXd cov_zh = Eigen::MatrixXd::Zero(p, q);
  cov_zh.rightCols(p) = z_law.cov;
  out.input_covariance = width.asDiagonal() * (cov_zh * beta + w_cov_hr.bottomRows(p) * e);
  return out;
}

LinkedMoments linked_gp_moments(const gp::GpEmulator& child, const GaussianMoments& parent_law,
                                std::span<const Eigen::Index> stochastic_coords, const Eigen::VectorXd& exogenous) {
  const Eigen::Index p = child.input_dim();
  require_same_dimension("exogenous input vector", p, exogenous.size());
  require_same_dimension("parent law", static_cast<long>(stochastic_coords.size()), parent_law.mean.size());
  GaussianMoments full(exogenous, Eigen::MatrixXd::Zero(p, p));
  for (std::size_t a = 0; a < stochastic_coords.size(); ++a) {
    const Eigen::Index ia = stochastic_coords[a];
    if (ia < 0 || ia >= p) {
      throw invalid_argument("binding_error", "stochastic coordinate " + std::to_string(ia) + " is out of range");
    }
    full.mean(ia) = parent_law.mean(static_cast<Eigen::Index>(a));
    for (std::size_t b = 0; b < stochastic_coords.size(); ++b) {
      full.cov(ia, stochastic_coords[b]) = parent_law.cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  return linked_gp_moments(child, full);
}

}  // namespace uqnet::network
